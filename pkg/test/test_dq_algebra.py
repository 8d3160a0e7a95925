"""
Unit and property tests of the quaternion / dual quaternion algebra.
"""

import warnings

import numpy as np
import pytest

import screwkit as sk
from screwkit import dq_algebra as dqa
from screwkit.synth_oracle import random_pose


def _rand_quats(rng, n):
  q = rng.normal(size=(n, 4))
  return q / dqa.quat_norm(q)[:, None]


def test_quat_mul_examples():
  q = np.array([0.3, -0.1, 0.5, 0.2])
  np.testing.assert_array_equal(dqa.quat_mul([1., 0., 0., 0.], q), q)
  np.testing.assert_array_equal(dqa.quat_mul([0., 1., 0., 0.],
                                             [0., 0., 1., 0.]),
                                [0., 0., 0., 1.])
  r = np.array([np.cos(np.pi/4), 0., 0., np.sin(np.pi/4)])
  np.testing.assert_allclose(dqa.quat_mul(r, r), [0., 0., 0., 1.], atol=1e-15)
  R = dqa.quat_to_matrix(r)
  np.testing.assert_allclose(R.dot(R), dqa.quat_to_matrix(dqa.quat_mul(r, r)),
                             atol=1e-12)


def test_quaternion_identities(rng):
  """ associativity and unit closure on a batch of random quaternions """
  n = 10000
  p, q, r = _rand_quats(rng, n), _rand_quats(rng, n), _rand_quats(rng, n)
  lhs = dqa.quat_mul(dqa.quat_mul(p, q), r)
  rhs = dqa.quat_mul(p, dqa.quat_mul(q, r))
  np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-9)
  np.testing.assert_allclose(dqa.quat_norm(dqa.quat_mul(p, q)), 1.,
                             rtol=0, atol=1e-9)
  ident = dqa.quat_mul(p, dqa.quat_conj(p))
  np.testing.assert_allclose(ident, np.tile([1., 0., 0., 0.], (n, 1)),
                             rtol=0, atol=1e-9)


def test_dual_quaternion_identities(rng):
  for _ in range(1000):
    D1, D2, D3 = random_pose(rng), random_pose(rng), random_pose(rng)
    assert sk.dq_isclose((D1 * D2) * D3, D1 * (D2 * D3))
    assert sk.dq_isclose(D1 * D1.conjugate(), sk.DualQuaternion.identity())
    assert (D1 * D2).is_unit()
    np.testing.assert_array_equal(sk.dq_mul(D1, D2).as_array(),
                                  (D1 * D2).as_array())
    np.testing.assert_array_equal(D1.dagger().real, D1.conjugate().real)
    np.testing.assert_array_equal(D1.dagger().dual, -D1.conjugate().dual)
    pose = sk.dq_to_pose(D1)
    assert sk.dq_isclose(sk.pose_to_dq(pose), D1)
    np.testing.assert_allclose(sk.pose_to_dq(pose).position, D1.position,
                               rtol=0, atol=1e-9)


def test_pose_encoding():
  D = sk.DualQuaternion.from_pose([1., 0., 0., 0.], [1., 2., 3.])
  np.testing.assert_array_equal(D.dual, [0., 0.5, 1., 1.5])
  I = sk.DualQuaternion.from_pose([1., 0., 0., 0.], [0., 0., 0.])
  np.testing.assert_array_equal(I.as_array(),
                                sk.DualQuaternion.identity().as_array())
  T = sk.DualQuaternion.from_translation([0., 0., 0.1]) * \
      sk.DualQuaternion.from_translation([0., 0., 0.2])
  np.testing.assert_allclose(T.position, [0., 0., 0.3], atol=1e-15)


def test_renormalization():
  q = np.array([1. + 5e-8, 0., 0., 0.])
  with warnings.catch_warnings(record=True) as w:
    warnings.simplefilter("always")
    D = sk.DualQuaternion.from_pose(q, [0., 0., 0.])
  assert len(w) == 1
  assert dqa.quat_norm(D.real) == pytest.approx(1., abs=1e-15)
  with pytest.raises(ValueError):
    sk.DualQuaternion.from_pose([1.1, 0., 0., 0.], [0., 0., 0.])
  # already unit within 1e-9: kept bit for bit
  q = np.array([0.6, 0.8, 0., 0.])
  np.testing.assert_array_equal(sk.DualQuaternion.from_pose(q, [0, 0, 0]).real,
                                q)


def test_transform_point(rng):
  for _ in range(50):
    D = random_pose(rng)
    v = rng.normal(size=3)
    R = dqa.quat_to_matrix(D.real)
    np.testing.assert_allclose(D.transform_point(v), R.dot(v) + D.position,
                               rtol=0, atol=1e-12)


def test_matrix_interop(rng):
  D = random_pose(rng)
  T = sk.dq_to_matrix(D)
  assert sk.dq_isclose(sk.dq_from_matrix(T), D)
  assert sk.dq_isclose(sk.dq_from_matrix(T.ravel().tolist()), D)
  bad = T.copy()
  bad[0, 0] += 1e-3
  with pytest.raises(ValueError):
    sk.dq_from_matrix(bad)
  mirror = np.diag([1., 1., -1., 1.])
  with pytest.raises(ValueError):
    sk.dq_from_matrix(mirror)
  with pytest.raises(ValueError):
    sk.dq_from_matrix(np.eye(3))


def test_power():
  D = sk.DualQuaternion.from_pose(dqa.quat_from_axis_angle([0, 0, 1], 0.8),
                                  [0.3, -0.2, 0.1])
  assert sk.dq_isclose(sk.dq_power(D, 0.), sk.DualQuaternion.identity())
  assert sk.dq_isclose(sk.dq_power(D, 1.), D)
  R90 = sk.DualQuaternion.from_rotation(
      dqa.quat_from_axis_angle([0, 0, 1], np.pi/2))
  R45 = sk.DualQuaternion.from_rotation(
      dqa.quat_from_axis_angle([0, 0, 1], np.pi/4))
  assert sk.dq_isclose(sk.dq_power(R90, 0.5), R45)
  I = sk.DualQuaternion.identity()
  for tau in (-1., 0.3, 2.):
    assert sk.dq_isclose(sk.dq_power(I, tau), I)


def test_power_through_translation_limit():
  """ the series branches make D^tau continuous as theta goes to 0 """
  p = np.array([0.1, 0.2, 0.3])
  T = sk.DualQuaternion.from_translation(p)
  np.testing.assert_allclose(sk.dq_power(T, 0.25).position, 0.25*p,
                             rtol=0, atol=1e-12)
  for angle in (1e-7, 1e-4, 5e-3, 2e-2):
    D = sk.DualQuaternion.from_pose(
        dqa.quat_from_axis_angle([0, 1, 0], angle), p)
    half = sk.dq_power(D, 0.5)
    assert sk.dq_isclose(half * half, D, atol=1e-12)


def test_sclerp():
  D1 = sk.DualQuaternion.identity()
  D2 = sk.DualQuaternion.from_translation([0., 0., 0.4])
  assert sk.dq_isclose(sk.sclerp(D1, D2, 0.), D1)
  assert sk.dq_isclose(sk.sclerp(D1, D2, 1.), D2)
  np.testing.assert_allclose(sk.sclerp(D1, D2, 0.5).position, [0, 0, 0.2],
                             atol=1e-15)
  with pytest.raises(ValueError):
    sk.sclerp(D1, D2, 1.5)
  np.testing.assert_allclose(sk.sclerp_extrapolate(D1, D2, 1.5).position,
                             [0., 0., 0.6], atol=1e-14)


def test_sclerp_circular_arc():
  # 90 deg about z through (1, 0, 0)
  rot = sk.ScrewParams.from_point([0, 0, 1], [1., 0., 0.], 0., np.pi/2)
  D2 = sk.dq_from_screw(rot)
  D1 = sk.DualQuaternion.identity()
  mid = sk.sclerp(D1, D2, 0.5)
  assert sk.dist_phi(mid, sk.DualQuaternion.from_rotation(
      dqa.quat_from_axis_angle([0, 0, 1], np.pi/4))) < 1e-12
  for tau in np.linspace(0., 1., 11):
    p = sk.sclerp(D1, D2, tau).position
    assert np.linalg.norm(p - [1., 0., 0.]) == pytest.approx(1., abs=1e-12)
    assert p[2] == pytest.approx(0., abs=1e-12)


def test_sclerp_sign_convention():
  D1 = sk.DualQuaternion.from_pose(dqa.quat_from_axis_angle([1, 0, 0], 0.2),
                                   [0., 0., 0.])
  D2 = sk.DualQuaternion.from_pose(dqa.quat_from_axis_angle([1, 0, 0], 0.6),
                                   [0.1, 0., 0.])
  a = sk.sclerp(D1, D2, 0.5)
  b = sk.sclerp(D1, -D2, 0.5)
  assert sk.dq_isclose(a, b)


def test_sclerp_constant_screw(rng):
  """ consecutive relative displacements along a ScLERP path share one screw
  """
  taus = np.linspace(0., 1., 64)
  for _ in range(100):
    D1, D2 = random_pose(rng), random_pose(rng)
    real, dual = sk.sclerp_many(D1, D2, taus)
    path = [sk.DualQuaternion(r, d) for r, d in zip(real, dual)]
    steps = [sk.screw_params_from_dq(b * a.conjugate())
             for a, b in zip(path[:-1], path[1:])]
    for s in steps[1:]:
      assert np.arccos(min(1., np.dot(s.axis, steps[0].axis))) < 1e-6
      assert abs(s.pitch - steps[0].pitch) < 1e-6


def test_sclerp_many_matches_sclerp(rng):
  D1, D2 = random_pose(rng), random_pose(rng)
  taus = np.array([0., 0.2, 0.7, 1.])
  real, dual = sk.sclerp_many(D1, D2, taus)
  for tau, r, d in zip(taus, real, dual):
    assert sk.dq_isclose(sk.DualQuaternion(r, d), sk.sclerp(D1, D2, tau),
                         atol=1e-12)


def test_screw_params_examples():
  p = sk.screw_params_from_dq(sk.DualQuaternion.from_translation([0, 0, 0.3]))
  assert p.is_translation
  np.testing.assert_allclose(p.axis, [0., 0., 1.])
  assert p.magnitude == pytest.approx(0.3)
  np.testing.assert_array_equal(p.moment, np.zeros(3))

  T = np.eye(4)
  T[:3, :3] = [[0., -1., 0.], [1., 0., 0.], [0., 0., 1.]]
  T[:3, 3] = [1., -1., 0.]   # rotation about z through (1, 0, 0)
  p = sk.screw_params_from_dq(sk.dq_from_matrix(T))
  np.testing.assert_allclose(p.axis, [0., 0., 1.], atol=1e-12)
  np.testing.assert_allclose(p.moment, [0., -1., 0.], atol=1e-12)
  assert p.magnitude == pytest.approx(np.pi/2)
  assert p.pitch == pytest.approx(0., abs=1e-12)
  np.testing.assert_allclose(p.point, [1., 0., 0.], atol=1e-12)

  with pytest.raises(sk.NoMotionError):
    sk.screw_params_from_dq(sk.DualQuaternion.identity())


def test_screw_params_40deg(revolute_z):
  D = sk.screw_displacement(revolute_z, np.deg2rad(40.))
  p = sk.screw_params_from_dq(D)
  np.testing.assert_allclose(p.axis, [0., 0., 1.], atol=1e-12)
  np.testing.assert_allclose(p.moment, [0.2, -0.5, 0.], atol=1e-12)
  assert p.magnitude == pytest.approx(np.deg2rad(40.), abs=1e-12)
  assert p.pitch == pytest.approx(0., abs=1e-12)


def test_screw_params_round_trip(rng):
  for _ in range(1000):
    D = random_pose(rng)
    p = sk.screw_params_from_dq(D)
    assert 0. <= p.magnitude <= np.pi
    assert abs(np.dot(p.axis, p.moment)) < 1e-9
    assert sk.dq_isclose(sk.dq_from_screw(p), D)


def test_screw_log_exp(rng):
  for _ in range(100):
    D = random_pose(rng)
    a, b = sk.dq_log(D)
    assert sk.dq_isclose(sk.dq_exp(a, b), D, atol=1e-12)


def test_screw_params_validation():
  with pytest.raises(ValueError):
    sk.ScrewParams([0., 0., 2.], [0., 0., 0.], 0., 1.)
  with pytest.raises(ValueError):
    sk.ScrewParams([0., 0., 1.], [0., 0., 1.], 0., 1.)
  s = sk.ScrewParams([0., 0., 1.], [1., 0., 0.], np.inf, 0.3)
  np.testing.assert_array_equal(s.moment, np.zeros(3))
  assert s.translation_along_axis == 0.3
  assert s == sk.ScrewParams.translation([0., 0., 1.], 0.3)


def test_unit_axis_kept_bit_exact(rng):
  """ an axis already normalized to round-off is stored as given """
  for v in rng.normal(size=(500, 3)):
    axis = v / np.linalg.norm(v)
    s = sk.ScrewParams(axis, np.zeros(3), np.inf, 1.)
    np.testing.assert_array_equal(s.axis, axis)
  s = sk.ScrewParams([0., 0., 1. + 1e-8], np.zeros(3), np.inf, 1.)
  assert np.linalg.norm(s.axis) == pytest.approx(1., abs=1e-15)


def test_distances():
  Q = sk.DualQuaternion.from_rotation(dqa.quat_from_axis_angle([1, 2, 3], 1.))
  assert sk.dist_phi(Q, Q) == 0.
  assert sk.dist_phi(Q, -Q) == 0.
  Z = sk.DualQuaternion.from_rotation([0., 0., 0., 1.])
  assert sk.dist_phi(sk.DualQuaternion.identity(), Z) == \
      pytest.approx(np.sqrt(2.))
  tol = sk.Tolerance(0.01, 0.1)
  A = sk.DualQuaternion.identity()
  assert sk.in_neighbourhood(A, A, tol)
  assert not sk.in_neighbourhood(A, sk.DualQuaternion.from_translation(
      [0.02, 0., 0.]), tol)
  # chord 2 sin(angle/4) = 0.05
  B = sk.DualQuaternion.from_pose(
      dqa.quat_from_axis_angle([0, 0, 1], 4.*np.arcsin(0.025)),
      [0.005, 0., 0.])
  assert sk.dist_phi(A, B) == pytest.approx(0.05)
  assert sk.in_neighbourhood(A, B, tol)


def test_tolerance_validation():
  with pytest.raises(ValueError):
    sk.Tolerance(0., 0.1)
  with pytest.raises(ValueError):
    sk.Tolerance(0.01, 2.)


def test_fk_poe():
  z = sk.ScrewParams.from_point([0, 0, 1], [0., 0., 0.], 0., 1.)
  home = sk.DualQuaternion.from_translation([1., 0., 0.])
  chain = sk.SerialChain([z], home)
  assert sk.dq_isclose(sk.fk_poe(chain, [0.]), home)
  np.testing.assert_allclose(sk.fk_poe(chain, [np.pi/2]).position,
                             [0., 1., 0.], atol=1e-12)

  x = sk.ScrewParams.translation([1., 0., 0.], 1.)
  chain = sk.SerialChain([x], sk.DualQuaternion.identity())
  np.testing.assert_allclose(sk.fk_poe(chain, [0.25]).position,
                             [0.25, 0., 0.], atol=1e-12)
  with pytest.raises(ValueError):
    sk.fk_poe(chain, [0.1, 0.2])
