"""
Tests of the constant screw hypothesis tests and screw parameter fits.
"""

import numpy as np
import pytest

import screwkit as sk
from screwkit import dq_algebra as dqa
from screwkit.screw_extraction import (GENERAL_SCREW, PURE_TRANSLATION,
                                       NOT_CONSTANT_SCREW, NO_MOTION)
from screwkit.synth_oracle import (SynthLeg, SynthSpec, gen_trajectory,
                                   random_pose)


def _traj(legs, start=None, sigma_p=0., sigma_phi=0., seed=0):
  spec = SynthSpec([SynthLeg(*leg) for leg in legs], start, sigma_p,
                   sigma_phi, seed)
  return gen_trajectory(spec)[0]


def _z_translation(n=20, length=0.3):
  return _traj([(sk.ScrewParams.translation([0., 0., 1.], 1.), length, n)])


def _l_shape():
  rot = sk.ScrewParams.from_point([0, 0, 1], [0.1, 0., 0.], 0., 1.)
  up = sk.ScrewParams.translation([0., 0., 1.], 1.)
  return _traj([(rot, np.pi/3, 15), (up, 0.3, 15)])


class TestGetScrewParameters(object):

  def test_revolute(self, revolute_z, tol):
    traj = _traj([(revolute_z, np.deg2rad(40.), 30)])
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == GENERAL_SCREW
    s = fit.params
    np.testing.assert_allclose(s.axis, [0., 0., 1.], atol=1e-9)
    np.testing.assert_allclose(s.moment, [0.2, -0.5, 0.], atol=1e-9)
    assert s.pitch == pytest.approx(0., abs=1e-9)
    assert s.magnitude == pytest.approx(0.698132, abs=1e-6)
    assert sk.classify_joint(s) == 'revolute'
    assert np.all(np.diff(fit.per_pose_tau) >= 0.)
    assert np.all(fit.residuals[:, 0] <= tol.eps_p)
    assert np.all(fit.residuals[:, 1] <= tol.eps_phi)
    np.testing.assert_allclose(fit.per_pose_tau, np.linspace(0., 1., 30),
                               atol=1e-5)

  def test_revolute_from_any_start(self, revolute_z, tol, rng):
    """ the screw is the world-frame displacement, whatever the start pose """
    for _ in range(5):
      traj = _traj([(revolute_z, 0.5, 12)], start=random_pose(rng))
      s = sk.get_screw_parameters(traj, tol).params
      assert sk.screw_params_isclose(s, revolute_z.with_magnitude(0.5))

  def test_translation(self, tol):
    fit = sk.get_screw_parameters(_z_translation(), tol)
    assert fit.verdict == PURE_TRANSLATION
    assert fit.params.is_translation
    assert fit.params.magnitude == pytest.approx(0.3)
    np.testing.assert_allclose(fit.params.axis, [0., 0., 1.], atol=1e-12)
    np.testing.assert_array_equal(fit.params.moment, np.zeros(3))
    assert sk.classify_joint(fit.params) == 'prismatic'

  def test_helical(self, tol):
    helix = sk.ScrewParams.from_point([1., 1., 0.], [0., 0., 0.2], 0.02, 1.)
    traj = _traj([(helix, 2., 30)])
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == GENERAL_SCREW
    assert fit.params.pitch == pytest.approx(0.02, abs=1e-6)
    assert sk.check_if_general_screw(traj, tol)
    assert not sk.check_if_prismatic(traj, tol)

  def test_not_constant(self, tol):
    traj = _l_shape()
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == NOT_CONSTANT_SCREW
    assert fit.params is None
    assert not sk.check_if_general_screw(traj, tol)
    assert not sk.check_if_prismatic(traj, tol)
    assert not sk.check_if_screw(traj, tol)

  def test_no_motion(self, tol):
    D = sk.DualQuaternion.from_pose([0.6, 0.8, 0., 0.], [0.1, 0.2, 0.3])
    traj = sk.PoseTrajectory([D] * 5)
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == NO_MOTION
    assert fit.params is None
    check = sk.check_if_prismatic(traj, tol)
    assert not check and check.no_motion
    check = sk.check_if_general_screw(traj, tol)
    assert not check and check.no_motion

  def test_two_poses(self, tol):
    D1 = sk.DualQuaternion.identity()
    D2 = sk.DualQuaternion.from_translation([0.5, 0., 0.])
    fit = sk.get_screw_parameters(sk.PoseTrajectory([D1, D2]), tol)
    assert fit.verdict == PURE_TRANSLATION
    D3 = sk.DualQuaternion.from_pose(
        dqa.quat_from_axis_angle([0, 0, 1], 2.), [0.5, 0., 0.])
    fit = sk.get_screw_parameters(sk.PoseTrajectory([D1, D3]), tol)
    assert fit.verdict == GENERAL_SCREW
    assert sk.dq_isclose(sk.dq_from_screw(fit.params), D3)
    with pytest.raises(ValueError):
      sk.get_screw_parameters(sk.PoseTrajectory([D1]), tol)

  def test_pure_rotation_is_not_prismatic(self, tol):
    rot = sk.ScrewParams.from_point([0, 0, 1], [0., 0., 0.], 0., 1.)
    traj = _traj([(rot, np.deg2rad(40.), 20)])
    assert not sk.check_if_prismatic(traj, tol)
    assert sk.check_if_general_screw(traj, tol)

  def test_rotation_about_world_axis(self, tol):
    """ a joint turning about an axis through the world origin, with the
    end effector away from it """
    rot = sk.ScrewParams.from_point([0, 0, 1], [0., 0., 0.], 0., 1.)
    start = sk.DualQuaternion.from_translation([0.6, 0.1, 0.3])
    traj = _traj([(rot, np.deg2rad(40.), 5)], start=start)
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == GENERAL_SCREW
    assert sk.screw_params_isclose(fit.params,
                                   rot.with_magnitude(np.deg2rad(40.)))
    np.testing.assert_allclose(fit.per_pose_tau, np.linspace(0., 1., 5),
                               atol=1e-5)

  def test_clean_translation_hypotheses(self, tol):
    traj = _z_translation()
    check = sk.check_if_prismatic(traj, tol)
    assert check and check.accepted and not check.no_motion
    assert not sk.check_if_general_screw(traj, tol)


def test_relative_and_dq_extraction_agree(rng):
  for _ in range(50):
    D = random_pose(rng)
    s1 = sk.screw_params_from_dq(D)
    s2 = sk.screw_extraction.screw_params_from_relative(D.real, D.dual)
    assert sk.screw_params_isclose(s1, s2, atol=1e-8)


def test_project_onto_screw(revolute_z, tol):
  D1 = sk.DualQuaternion.from_pose([1., 0., 0., 0.], [0.8, 0.2, 0.1])
  Dn = sk.screw_displacement(revolute_z, 1.) * D1
  assert sk.project_onto_screw(D1, Dn, D1, tol) == 0.
  Dk = sk.sclerp(D1, Dn, 0.37)
  assert sk.project_onto_screw(D1, Dn, Dk, tol) == pytest.approx(0.37,
                                                                 abs=1e-4)
  # 5 cm off the path along the axis
  off = sk.DualQuaternion.from_translation([0., 0., 0.05]) * Dk
  assert sk.project_onto_screw(D1, Dn, off, tol) is None
  # a lower bound below the best tau leaves it alone, one past it pins tau
  # to the bound, 4 cm away along the arc
  assert sk.project_onto_screw(D1, Dn, Dk, tol, tau_lo=0.3) == \
      pytest.approx(0.37, abs=1e-4)
  assert sk.project_onto_screw(D1, Dn, Dk, tol, tau_lo=0.5) is None
  with pytest.raises(sk.NoMotionError):
    sk.project_onto_screw(D1, D1, Dk, tol)
  with pytest.raises(ValueError):
    sk.project_onto_screw(D1, Dn, Dk, tol, tau_lo=1.5)


def test_end_effector_frame_invariance(rng, tol):
  helix = sk.ScrewParams.from_point([0., 1., 1.], [0.2, 0., 0.], 0.05, 1.)
  traj = _traj([(helix, 1.2, 25)], start=random_pose(rng, 0.5))
  ref = sk.get_screw_parameters(traj, tol)
  assert ref.verdict == GENERAL_SCREW
  for _ in range(20):
    moved = traj.right_multiply(random_pose(rng))
    fit = sk.get_screw_parameters(moved, tol)
    assert fit.verdict == ref.verdict
    assert sk.screw_params_isclose(fit.params, ref.params)


def test_world_frame_equivariance(rng, tol):
  helix = sk.ScrewParams.from_point([0., 1., 1.], [0.2, 0., 0.], 0.05, 1.)
  traj = _traj([(helix, 1.2, 25)])
  ref = sk.get_screw_parameters(traj, tol).params
  W = random_pose(rng)
  s = sk.get_screw_parameters(traj.left_multiply(W), tol).params
  assert s.magnitude == pytest.approx(ref.magnitude, abs=1e-9)
  assert s.pitch == pytest.approx(ref.pitch, abs=1e-9)
  np.testing.assert_allclose(s.axis, dqa.quat_to_matrix(W.real).dot(ref.axis),
                             atol=1e-9)
  # the new axis passes through the moved axis point
  q = W.transform_point(ref.point) - s.point
  np.testing.assert_allclose(np.cross(q, s.axis), np.zeros(3), atol=1e-9)


def test_noisy_classification(tol):
  """ sigma_p = 2 mm, sigma_phi = 0.01 on both hypotheses, 100 seeds each """
  prismatic = sk.ScrewParams.translation([0.6, 0., 0.8], 1.)
  revolute = sk.ScrewParams.from_point([0, 0, 1], [0.1, 0., 0.], 0., 1.)
  for seed in range(100):
    traj = _traj([(prismatic, 0.3, 30)], sigma_p=0.002, sigma_phi=0.01,
                 seed=seed)
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == PURE_TRANSLATION
    traj = _traj([(revolute, np.pi/3, 30)], sigma_p=0.002, sigma_phi=0.01,
                 seed=seed)
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == GENERAL_SCREW
    assert abs(fit.params.pitch) <= 0.03
    assert sk.classify_joint(fit.params) == 'revolute'


@pytest.mark.parametrize("offset", [[0.6, 0.2, 0.4], [1., 0.5, 0.5]])
def test_noisy_classification_away_from_origin(offset, tol):
  """ the same noise on demonstrations that start far from the world origin """
  start = sk.DualQuaternion.from_translation(offset)
  prismatic = sk.ScrewParams.translation([0.6, 0., 0.8], 1.)
  revolute = sk.ScrewParams.from_point([0, 0, 1],
                                       np.add(offset, [0.1, 0., 0.]), 0., 1.)
  for seed in range(50):
    traj = _traj([(prismatic, 0.3, 30)], start=start, sigma_p=0.002,
                 sigma_phi=0.01, seed=seed)
    assert sk.get_screw_parameters(traj, tol).verdict == PURE_TRANSLATION
    traj = _traj([(revolute, np.pi/3, 30)], start=start, sigma_p=0.002,
                 sigma_phi=0.01, seed=seed)
    fit = sk.get_screw_parameters(traj, tol)
    assert fit.verdict == GENERAL_SCREW
    assert sk.classify_joint(fit.params) == 'revolute'


def test_noisy_world_shift(rng, tol):
  prismatic = sk.ScrewParams.translation([0.6, 0., 0.8], 1.)
  revolute = sk.ScrewParams.from_point([0, 0, 1], [0.1, 0., 0.], 0., 1.)
  for seed in range(20):
    W = random_pose(rng)
    cases = [(prismatic, 0.3, PURE_TRANSLATION),
             (revolute, np.pi/3, GENERAL_SCREW)]
    for screw, magnitude, verdict in cases:
      traj = _traj([(screw, magnitude, 30)], sigma_p=0.002, sigma_phi=0.01,
                   seed=seed)
      ref = sk.get_screw_parameters(traj, tol)
      fit = sk.get_screw_parameters(traj.left_multiply(W), tol)
      assert ref.verdict == fit.verdict == verdict
      np.testing.assert_allclose(fit.residuals, ref.residuals, atol=1e-6)


def test_classify_joint():
  s = sk.ScrewParams.from_point([0, 0, 1], [0., 0., 0.], 0.1, 1.)
  assert sk.classify_joint(s) == 'helical'
  assert sk.classify_joint(s, pitch_tol=0.2) == 'revolute'


class TestPoseTrajectory(object):

  def test_window_and_slices(self):
    traj = _z_translation(10, 0.9)
    w = traj.window(2, 5)
    assert len(w) == 4
    np.testing.assert_array_equal(w[0].position, traj[2].position)
    np.testing.assert_array_equal(w[3].position, traj[5].position)
    assert len(list(traj)) == 10

  def test_validation(self):
    with pytest.raises(ValueError):
      sk.PoseTrajectory.from_arrays(np.zeros((0, 4)), np.zeros((0, 3)))
    with pytest.raises(ValueError):
      sk.PoseTrajectory.from_arrays([[2., 0., 0., 0.]], [[0., 0., 0.]])
    with pytest.raises(ValueError):
      sk.PoseTrajectory.from_arrays([[1., 0., 0., 0.]], [[np.nan, 0., 0.]])
    I = sk.DualQuaternion.identity()
    with pytest.raises(ValueError):
      sk.PoseTrajectory([I, I], timestamps=[1., 1.])
    traj = sk.PoseTrajectory([I, I], timestamps=[0., 0.5])
    np.testing.assert_array_equal(traj[1:].timestamps, [0.5])
