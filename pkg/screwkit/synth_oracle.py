""" Synthetic demonstrations with known constant screw structure.

A SynthSpec chains legs, each a screw displacement applied in the world
frame to the pose where the previous leg ended. gen_trajectory samples the
legs, perturbs every pose and returns the noiseless segmentation alongside.

Noise convention: the position offset is Gaussian with per-component
standard deviation sigma_p/sqrt(3), so the RMS offset length is sigma_p and
the offset length follows sigma_p/sqrt(3) times a chi distribution with 3
degrees of freedom (mean 0.921 sigma_p, median 0.888 sigma_p). The
orientation is composed with a random rotation vector with per-component
standard deviation 2 sigma_phi/sqrt(3); since the quaternion chord of a
small rotation alpha is about alpha/2, the RMS chord is sigma_phi.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

from collections import namedtuple

import numpy as np

from .dq_algebra import (DualQuaternion, ScrewParams, quat_from_rotvec,
                         quat_mul, quat_norm, screw_displacement)
from .screw_extraction import (GENERAL_SCREW, PURE_TRANSLATION,
                               PoseTrajectory)
from .segmentation import ResidualStats, ScrewSegment, Segmentation


class SynthLeg(namedtuple('SynthLeg', ['screw', 'magnitude', 'samples'])):
    """ One leg: screw (ScrewParams), magnitude (rad or m) and the number of
    poses it adds (the first leg's count includes the start pose). """

    __slots__ = ()

    def __new__(cls, screw, magnitude, samples):
        samples = int(samples)
        if samples < 2:
            raise ValueError("A leg needs at least 2 samples, got %d"
                             % samples)
        return super(SynthLeg, cls).__new__(cls, screw, float(magnitude),
                                            samples)


class SynthSpec(object):
    """ Legs, start pose, noise (sigma_p [m], sigma_phi) and seed """

    def __init__(self, legs, start=None, sigma_p=0., sigma_phi=0., seed=0):
        legs = [leg if isinstance(leg, SynthLeg) else SynthLeg(*leg)
                for leg in legs]
        if len(legs) == 0:
            raise ValueError("A synth spec needs at least one leg")
        if not (sigma_p >= 0. and sigma_phi >= 0.):
            raise ValueError("Noise levels must be non-negative, got (%s, %s)"
                             % (sigma_p, sigma_phi))
        self.legs = tuple(legs)
        self.start = DualQuaternion.identity() if start is None else start
        self.sigma_p = float(sigma_p)
        self.sigma_phi = float(sigma_phi)
        self.seed = int(seed)

    def with_seed(self, seed):
        return SynthSpec(self.legs, self.start, self.sigma_p, self.sigma_phi,
                         seed)

    @property
    def length(self):
        return sum(leg.samples for leg in self.legs)


def perturb_pose(D, sigma_p, sigma_phi, rng):
    """ D with an isotropic Gaussian position offset and a small random
    rotation composed on the orientation (see module docs for the scales).
    Zero noise returns D itself and draws nothing from rng. """
    if sigma_p < 0. or sigma_phi < 0.:
        raise ValueError("Noise levels must be non-negative, got (%s, %s)"
                         % (sigma_p, sigma_phi))
    if sigma_p == 0. and sigma_phi == 0.:
        return D
    position = D.position + rng.normal(0., sigma_p / np.sqrt(3.), 3)
    rotvec = rng.normal(0., 2. * sigma_phi / np.sqrt(3.), 3)
    q = quat_mul(quat_from_rotvec(rotvec), D.real)
    return DualQuaternion.from_pose(q / quat_norm(q), position)


def gen_trajectory(spec):
    """ Sample spec into (noisy PoseTrajectory, ground truth Segmentation).

    Leg k contributes its samples at equal steps of its magnitude; ground
    truth segments hold the noiseless end poses and the leg screws.
    """
    rng = np.random.default_rng(spec.seed)
    clean = [spec.start]
    segments = []
    for k, leg in enumerate(spec.legs):
        corner = clean[-1]
        start_index = len(clean) - 1
        if k == 0:
            fractions = np.linspace(0., 1., leg.samples)[1:]
        else:
            fractions = np.linspace(0., 1., leg.samples + 1)[1:]
        for f in fractions:
            clean.append(screw_displacement(leg.screw, f * leg.magnitude)
                         * corner)
        verdict = PURE_TRANSLATION if leg.screw.is_translation \
            else GENERAL_SCREW
        segments.append(ScrewSegment(start_index, len(clean) - 1, corner,
                                     clean[-1], verdict,
                                     leg.screw.with_magnitude(leg.magnitude),
                                     ResidualStats(0., 0., 0., 0.)))
    noisy = [perturb_pose(D, spec.sigma_p, spec.sigma_phi, rng)
             for D in clean]
    return PoseTrajectory(noisy), Segmentation(segments, len(clean))


def random_pose(rng, max_translation=1.):
    """ Uniform random orientation, position uniform in a cube """
    q = rng.normal(size=4)
    q /= quat_norm(q)
    if q[0] < 0.:
        q = -q
    return DualQuaternion.from_pose(
        q, rng.uniform(-max_translation, max_translation, 3))


def random_screw(rng, kind='general', max_offset=0.5, max_pitch=0.1):
    """ Random unit screw of the given kind: 'general', 'revolute' or
    'prismatic'. The magnitude is left at 1. """
    if kind not in ('general', 'revolute', 'prismatic'):
        raise ValueError("Unknown screw kind %s" % kind)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    if kind == 'prismatic':
        return ScrewParams.translation(axis, 1.)
    point = rng.uniform(-max_offset, max_offset, 3)
    pitch = 0. if kind == 'revolute' else rng.uniform(-max_pitch, max_pitch)
    return ScrewParams.from_point(axis, point, pitch, 1.)
