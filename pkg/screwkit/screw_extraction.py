""" Constant screw extraction from a pose trajectory.

A trajectory D_1, ..., D_n is a constant screw motion when every pose D_k
lies in the (eps_p, eps_phi) neighbourhood of some pose of the path
(D_n * D_1^*)^tau * D_1 with tau non-decreasing along the trajectory. Two
hypotheses are tried in order: a pure translation (orientation of D_1,
position p_1 + tau (p_n - p_1)) and a general screw. Residuals compare world
poses. The screw parameters are read from D_n * D_1^*, so they do not depend
on the end-effector frame; on noiseless input neither do the verdicts.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"
__version__   = "0.3.0"

__license__ = """
Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
THE SOFTWARE.
"""

import logging
import warnings
from collections import namedtuple

import numpy as np
from scipy.linalg import solve as _solve

from .dq_algebra import (THETA_MIN, D_MIN, UNIT_TOL, RENORM_TOL,
                         DualQuaternion, NoMotionError, ScrewParams,
                         quat_norm, quat_to_matrix, screw_params_from_dq,
                         _chord, _dual_from_pose, _dq_mul_arrays, _position,
                         _relative, _screw_log, _vec_norm)

logger = logging.getLogger(__name__)


# coarse grid of the line search on tau
GRID_SAMPLES = 257

# resolution of the golden-section refinement
TAU_RESOLUTION = 1.e-6

PURE_TRANSLATION = 'PureTranslation'
GENERAL_SCREW = 'GeneralScrew'
NOT_CONSTANT_SCREW = 'NotConstantScrew'
NO_MOTION = 'NoMotion'

SCREW_VERDICTS = (PURE_TRANSLATION, GENERAL_SCREW)
VERDICTS = (PURE_TRANSLATION, GENERAL_SCREW, NOT_CONSTANT_SCREW, NO_MOTION)

_GRID = np.linspace(0., 1., GRID_SAMPLES)
_CELL = 1. / (GRID_SAMPLES - 1)
_GOLDEN = 0.5 * (np.sqrt(5.) - 1.)
_REFINE_STEPS = int(np.ceil(np.log(TAU_RESOLUTION / (2.*_CELL))
                            / np.log(_GOLDEN)))

# targets evaluated together in one vectorized step of a sweep
_SWEEP_BLOCK = 16


##############################################
class PoseTrajectory(object):
    """ Ordered sequence of poses with optional timestamps.

    Poses are stored as unit quaternion rotations (n, 4) and positions
    (n, 3); the dual parts (n, 4) are derived once. Timestamps, when given,
    must be strictly increasing; fitting ignores them.
    """

    def __init__(self, poses, timestamps=None):
        poses = list(poses)
        if len(poses) == 0:
            raise ValueError("A trajectory needs at least one pose")
        rotations = np.array([D.real for D in poses])
        positions = np.array([D.position for D in poses])
        self._set(rotations, positions, timestamps, check=True)

    @classmethod
    def from_arrays(cls, rotations, positions, timestamps=None, check=True):
        traj = cls.__new__(cls)
        traj._set(rotations, positions, timestamps, check)
        return traj

    def _set(self, rotations, positions, timestamps, check):
        rotations = np.array(rotations, dtype=float)
        positions = np.array(positions, dtype=float)
        if rotations.ndim != 2 or rotations.shape[1] != 4 or \
           positions.shape != (rotations.shape[0], 3):
            raise ValueError("Expected (n, 4) rotations and (n, 3) positions,"
                             " got %s and %s"
                             % (rotations.shape, positions.shape))
        if len(rotations) == 0:
            raise ValueError("A trajectory needs at least one pose")
        if check:
            rotations = _unit_rows(rotations)
            bad = ~np.all(np.isfinite(positions), axis=1)
            if np.any(bad):
                raise ValueError("Pose %d has a non-finite position"
                                 % np.flatnonzero(bad)[0])
        if timestamps is not None:
            timestamps = np.array(timestamps, dtype=float)
            if timestamps.shape != (len(rotations),):
                raise ValueError("Got %d timestamps for %d poses"
                                 % (timestamps.size, len(rotations)))
            if np.any(np.diff(timestamps) <= 0.):
                raise ValueError("Timestamps must be strictly increasing")
            timestamps.setflags(write=False)
        dual = _dual_from_pose(rotations, positions)
        for arr in (rotations, positions, dual):
            arr.setflags(write=False)
        self.rotations = rotations
        self.positions = positions
        self.dual = dual
        self.timestamps = timestamps

    @property
    def real(self):
        return self.rotations

    def __len__(self):
        return len(self.rotations)

    def __getitem__(self, i):
        if isinstance(i, slice):
            ts = None if self.timestamps is None else self.timestamps[i]
            return PoseTrajectory.from_arrays(self.rotations[i],
                                              self.positions[i], ts,
                                              check=False)
        return DualQuaternion(self.rotations[i], self.dual[i],
                              self.positions[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def window(self, i, j):
        """ Poses i..j inclusive """
        return self[i:j+1]

    def right_multiply(self, C):
        """ D_k * C for every pose (a change of end-effector frame) """
        return self._from_dq_arrays(*_dq_mul_arrays(self.rotations, self.dual,
                                                    C.real, C.dual))

    def left_multiply(self, W):
        """ W * D_k for every pose (a change of world frame) """
        return self._from_dq_arrays(*_dq_mul_arrays(W.real, W.dual,
                                                    self.rotations, self.dual))

    def _from_dq_arrays(self, real, dual):
        return PoseTrajectory.from_arrays(real, _position(real, dual),
                                          self.timestamps, check=False)

    def relative_to(self, index=0):
        """ (real, dual) arrays of D_k * D_index^* for k >= index """
        return _relative(self.rotations[index:], self.dual[index:],
                         self.rotations[index], self.dual[index])

    def __repr__(self):
        return "PoseTrajectory(n=%d)" % len(self)


def _unit_rows(rotations):
    norms = quat_norm(rotations)
    err = np.abs(norms - 1.)
    bad = np.flatnonzero(~np.isfinite(norms) | (err > RENORM_TOL))
    if len(bad) > 0:
        raise ValueError("Orientation of pose %d has norm %.12g, expected 1"
                         % (bad[0], norms[bad[0]]))
    if np.any(err > UNIT_TOL):
        warnings.warn("Renormalizing %d orientations"
                      % np.count_nonzero(err > UNIT_TOL))
    return np.where((err > UNIT_TOL)[:, None], rotations / norms[:, None],
                    rotations)


ScrewFitResult = namedtuple('ScrewFitResult',
                            ['verdict', 'params', 'per_pose_tau', 'residuals'])
ScrewFitResult.__doc__ = """ Outcome of get_screw_parameters.

params is None for NotConstantScrew and NoMotion. per_pose_tau holds the
path parameter of each pose (NaN where the fit stopped early) and residuals
the (d_p, d_phi) pair of each pose against the fitted path.
"""


##############################################
###        Candidate constant screws       ###
##############################################

_IDENTITY = np.array([1., 0., 0., 0.])


def _objective(real, pos, target_real, target_pos, tol):
    """ max(d_p / eps_p, d_phi / eps_phi); a pose is within tol iff <= 1 """
    return np.maximum(_vec_norm(pos - target_pos) / tol.eps_p,
                      _chord(real, target_real) / tol.eps_phi)


class _TranslationPath(object):
    """ tau -> orientation of D_1 at position p_1 + tau (p_n - p_1).

    Rotations are returned relative to D_1, positions in the world frame.
    """

    def __init__(self, positions):
        self.origin = positions[0]
        self.direction = positions[-1] - positions[0]

    def sample(self, taus):
        taus = np.asarray(taus, dtype=float)
        return (np.tile(_IDENTITY, (len(taus), 1)),
                self.origin + taus[:, None] * self.direction)

    def line_search(self, target_real, target_pos, tol, tau_lo=0.,
                    stop_early=False):
        """ Closest point of the segment to each target in turn, never
        moving back along it. d_p is convex in tau and d_phi does not depend
        on it, so the clamped projection is exact. """
        dd = np.dot(self.direction, self.direction)
        if dd > 0.:
            proj = np.clip((target_pos - self.origin).dot(self.direction) / dd,
                           0., 1.)
        else:
            proj = np.zeros(len(target_pos))
        taus = np.maximum.accumulate(np.maximum(proj, tau_lo))
        return taus, len(taus)


class _ScrewPath(object):
    """ tau -> (D_n D_1^*)^tau D_1 for a relative displacement that rotates.

    Along the path p_1 turns by tau theta about the screw axis through c and
    advances tau d along it. Rotations are returned relative to D_1,
    positions in the world frame.
    """

    def __init__(self, delta_real, delta_dual, anchor_position):
        a, b = _screw_log(delta_real, delta_dual)
        self.theta = np.linalg.norm(a)
        omega = a / self.theta
        c = np.cross(omega, b) / self.theta
        v = anchor_position - c
        along = np.dot(omega, v) * omega
        self.omega = omega
        self.base = c + along
        self.radial = v - along
        self.tangent = np.cross(omega, v)
        self.advance = np.dot(omega, b) * omega

    def sample(self, taus):
        taus = np.asarray(taus, dtype=float)
        phi = taus * self.theta
        pos = (self.base + np.cos(phi)[..., None] * self.radial
               + np.sin(phi)[..., None] * self.tangent
               + taus[..., None] * self.advance)
        real = np.concatenate([np.cos(0.5*phi)[..., None],
                               np.sin(0.5*phi)[..., None] * self.omega],
                              axis=-1)
        return real, pos

    def objective(self, taus, target_real, target_pos, tol):
        real, pos = self.sample(taus)
        return _objective(real, pos, target_real, target_pos, tol)

    def golden(self, target_real, target_pos, tol, lo, hi):
        """ Golden-section minimization of the objective on the brackets
        [lo, hi], one per target, with a fixed number of steps. """
        g = _GOLDEN
        c = hi - g*(hi - lo)
        d = lo + g*(hi - lo)
        fc = self.objective(c, target_real, target_pos, tol)
        fd = self.objective(d, target_real, target_pos, tol)
        for _ in range(_REFINE_STEPS):
            left = fc <= fd
            lo, hi = np.where(left, lo, c), np.where(left, d, hi)
            x = np.where(left, hi - g*(hi - lo), lo + g*(hi - lo))
            fx = self.objective(x, target_real, target_pos, tol)
            c, fc, d, fd = (np.where(left, x, d), np.where(left, fx, fd),
                            np.where(left, c, x), np.where(left, fc, fx))
        best = fc <= fd
        return np.where(best, c, d), np.where(best, fc, fd)

    def _bounded(self, target_real, target_pos, tol, f_row, tau_lo):
        """ Minimize the objective over [tau_lo, 1] for one target """
        t_real, t_pos = target_real[None], target_pos[None]
        best_t = tau_lo
        best_f = self.objective([tau_lo], t_real, t_pos, tol)[0]
        i0 = np.searchsorted(_GRID, tau_lo, side='right')
        if i0 < GRID_SAMPLES:
            j = i0 + np.argmin(f_row[i0:])
            if f_row[j] < best_f:
                best_t, best_f = _GRID[j], f_row[j]
        if best_t == tau_lo and best_f <= 1.:
            return best_t, best_f
        lo = max(tau_lo, best_t - _CELL)
        hi = min(1., best_t + _CELL)
        if hi > lo:
            t, f = self.golden(t_real, t_pos, tol, np.array([lo]),
                               np.array([hi]))
            if f[0] < best_f:
                best_t, best_f = t[0], f[0]
        return best_t, best_f

    def _free(self, target_real, target_pos, tol, grid):
        """ Unconstrained optimum of each target: best grid cell, refined
        between its neighbours. Returns (f, t_free, f_free) with f the
        objective on the grid. """
        grid_real, grid_pos = grid
        f = _objective(grid_real[None], grid_pos[None], target_real[:, None],
                       target_pos[:, None], tol)
        cell = np.argmin(f, axis=1)
        lo = _GRID[np.maximum(cell - 1, 0)]
        hi = _GRID[np.minimum(cell + 1, GRID_SAMPLES - 1)]
        t_ref, f_ref = self.golden(target_real, target_pos, tol, lo, hi)
        f_grid = f[np.arange(len(cell)), cell]
        on_grid = f_grid <= f_ref
        return (f, np.where(on_grid, _GRID[cell], t_ref),
                np.where(on_grid, f_grid, f_ref))

    def line_search(self, target_real, target_pos, tol, tau_lo=0.,
                    stop_early=False):
        """ Non-decreasing tau minimizing the objective for each target in
        turn.

        The grid and the unconstrained refinement are evaluated for a block
        of targets at once; a target whose free optimum lies below the
        running lower bound is searched again on [tau_lo, 1]. Equal
        objective values resolve to the lowest tau. With stop_early the
        sweep ends at the first target outside tol, and later blocks are
        never evaluated.

        Returns (taus, count) where count targets were processed.
        """
        m = len(target_pos)
        taus = np.full(m, np.nan)
        if m == 0:
            return taus, 0
        grid = self.sample(_GRID)
        for start in range(0, m, _SWEEP_BLOCK):
            rows = slice(start, start + _SWEEP_BLOCK)
            f, t_free, f_free = self._free(target_real[rows],
                                           target_pos[rows], tol, grid)
            for i in range(len(t_free)):
                k = start + i
                if t_free[i] >= tau_lo:
                    t, fk = t_free[i], f_free[i]
                else:
                    t, fk = self._bounded(target_real[k], target_pos[k], tol,
                                          f[i], tau_lo)
                taus[k] = t
                if stop_early and fk > 1.:
                    return taus, k + 1
                tau_lo = t
        return taus, m


_HypothesisFit = namedtuple('_HypothesisFit',
                            ['accepted', 'taus', 'residuals'])


class HypothesisCheck(namedtuple('HypothesisCheck',
                                 ['accepted', 'no_motion'])):
    """ Outcome of one hypothesis test, truthy when accepted.

    no_motion is set when the trajectory has no net displacement; such a
    trajectory is accepted by neither hypothesis.
    """

    __slots__ = ()

    def __bool__(self):
        return bool(self.accepted)

    __nonzero__ = __bool__


def _fit_path(path, rel_real, positions, tol, stop_early=False):
    """ Test every pose of a window against one candidate path.

    rel_real holds the rotations relative to the first pose and positions
    the world positions of the window. The first pose sits at tau = 0 and
    the last at tau = 1; the intermediate poses get their tau from the line
    search.
    """
    n = len(rel_real)
    taus = np.full(n, np.nan)
    res = np.full((n, 2), np.nan)
    taus[0], taus[-1] = 0., 1.
    inner, count = path.line_search(rel_real[1:-1], positions[1:-1], tol,
                                    0., stop_early)
    taus[1:-1] = inner
    if count < n - 2:
        return _HypothesisFit(False, taus, res)
    real, pos = path.sample(taus)
    res[:, 0] = _vec_norm(pos - positions)
    res[:, 1] = _chord(real, rel_real)
    accepted = bool(np.all(res[:, 0] <= tol.eps_p)
                    and np.all(res[:, 1] <= tol.eps_phi))
    return _HypothesisFit(accepted, taus, res)


def _motion_size(real, dual):
    """ (theta, |p|) of a relative displacement """
    w = abs(real[0])
    theta = 2. * np.arctan2(np.linalg.norm(real[1:]), w)
    return theta, np.linalg.norm(_position(real, dual))


def screw_params_from_relative(real, dual):
    """ General screw parameters of a relative displacement.

    Solves p = [(I - e^{[omega] theta}) [omega] + theta omega omega^T] v for
    v, then h = omega . v and m = v - h omega.
    """
    real = np.asarray(real, dtype=float)
    dual = np.asarray(dual, dtype=float)
    if real[0] < 0.:
        real, dual = -real, -dual
    theta, _ = _motion_size(real, dual)
    if theta < THETA_MIN:
        raise ValueError("Rotation angle %.3g is below %.3g; the displacement"
                         " has no general screw axis" % (theta, THETA_MIN))
    omega = real[1:] / np.linalg.norm(real[1:])
    p = _position(real, dual)
    R = quat_to_matrix(real)
    W = np.array([[0., -omega[2], omega[1]],
                  [omega[2], 0., -omega[0]],
                  [-omega[1], omega[0], 0.]])
    A = (np.eye(3) - R).dot(W) + theta * np.outer(omega, omega)
    v = _solve(A, p)
    h = np.dot(omega, v)
    m = v - h * omega
    return ScrewParams(omega, m, h, theta)


def _fit_window(rel_real, rel_dual, positions, tol, stop_early=False):
    """ Classify a window of poses.

    rel_real, rel_dual are the relative displacements D_k * D_1^* and
    positions the world positions of the window. Residuals are measured
    between world poses; the screw parameters come from D_n * D_1^*.
    """
    n = len(rel_real)
    d_real, d_dual = rel_real[-1], rel_dual[-1]
    theta, dist = _motion_size(d_real, d_dual)

    if theta < THETA_MIN and dist < D_MIN:
        res = np.column_stack([_vec_norm(positions - positions[0]),
                               _chord(rel_real, _IDENTITY)])
        return ScrewFitResult(NO_MOTION, None, np.zeros(n), res)

    if n == 2:
        params = screw_params_from_dq(DualQuaternion(d_real, d_dual))
        verdict = PURE_TRANSLATION if params.is_translation else GENERAL_SCREW
        return ScrewFitResult(verdict, params, np.array([0., 1.]),
                              np.zeros((2, 2)))

    fit = None
    if dist >= D_MIN:
        fit = _fit_path(_TranslationPath(positions), rel_real, positions,
                        tol, stop_early)
        if fit.accepted:
            params = ScrewParams.translation(
                _position(d_real, d_dual) / dist, dist)
            return ScrewFitResult(PURE_TRANSLATION, params, fit.taus,
                                  fit.residuals)
    if theta >= THETA_MIN:
        path = _ScrewPath(d_real, d_dual, positions[0])
        fit = _fit_path(path, rel_real, positions, tol, stop_early)
        if fit.accepted:
            params = screw_params_from_relative(d_real, d_dual)
            return ScrewFitResult(GENERAL_SCREW, params, fit.taus,
                                  fit.residuals)
    return ScrewFitResult(NOT_CONSTANT_SCREW, None, fit.taus, fit.residuals)


def _fit_trajectory(traj, tol):
    rel_real, rel_dual = traj.relative_to(0)
    return _fit_window(rel_real, rel_dual, traj.positions, tol)


##############################################
###              Public API                ###
##############################################

def _require_two(traj):
    if len(traj) < 2:
        raise ValueError("Screw extraction needs at least 2 poses, got %d"
                         % len(traj))


def project_onto_screw(D1, Dn, Dk, tol, tau_lo=0.):
    """ tau in [tau_lo, 1] of the point of the constant screw from D1 to Dn
    closest to Dk, or None when Dk is not within tol of it.

    Closeness is max(d_p / eps_p, d_phi / eps_phi), the lowest tau winning
    a tie. Raises NoMotionError when D1 and Dn coincide.
    """
    if not 0. <= tau_lo <= 1.:
        raise ValueError("tau_lo must lie in [0, 1], got %s" % (tau_lo,))
    d_real, d_dual = _relative(Dn.real, Dn.dual, D1.real, D1.dual)
    k_real, _ = _relative(Dk.real, Dk.dual, D1.real, D1.dual)
    theta, dist = _motion_size(d_real, d_dual)
    if theta < THETA_MIN:
        if dist < D_MIN:
            raise NoMotionError("D1 and Dn coincide; there is no screw to "
                                "project onto")
        path = _TranslationPath(np.array([D1.position, Dn.position]))
    else:
        path = _ScrewPath(d_real, d_dual, D1.position)
    k_pos = np.asarray(Dk.position)
    taus, _ = path.line_search(k_real[None], k_pos[None], tol, tau_lo)
    tau = taus[0]
    real, pos = path.sample([tau])
    d_p = np.linalg.norm(pos[0] - k_pos)
    d_phi = _chord(real[0], k_real)
    if d_p <= tol.eps_p and d_phi <= tol.eps_phi:
        return float(tau)
    return None


def check_if_prismatic(traj, tol):
    """ Whether traj is a pure translation within tol, as a HypothesisCheck.

    A trajectory with no net motion is not prismatic and comes back with
    the no_motion flag set.
    """
    _require_two(traj)
    rel_real, rel_dual = traj.relative_to(0)
    theta, dist = _motion_size(rel_real[-1], rel_dual[-1])
    if dist < D_MIN:
        if theta < THETA_MIN:
            logger.debug("check_if_prismatic: no net motion")
            return HypothesisCheck(False, True)
        return HypothesisCheck(False, False)
    if len(traj) == 2:
        return HypothesisCheck(True, False)
    fit = _fit_path(_TranslationPath(traj.positions), rel_real,
                    traj.positions, tol)
    return HypothesisCheck(fit.accepted, False)


def check_if_general_screw(traj, tol):
    """ Whether traj follows one screw with a finite pitch within tol, as a
    HypothesisCheck. """
    _require_two(traj)
    rel_real, rel_dual = traj.relative_to(0)
    theta, dist = _motion_size(rel_real[-1], rel_dual[-1])
    if theta < THETA_MIN:
        return HypothesisCheck(False, bool(dist < D_MIN))
    if len(traj) == 2:
        return HypothesisCheck(True, False)
    path = _ScrewPath(rel_real[-1], rel_dual[-1], traj.positions[0])
    fit = _fit_path(path, rel_real, traj.positions, tol)
    return HypothesisCheck(fit.accepted, False)


def get_screw_parameters(traj, tol):
    """ Classify traj and return its constant screw, if it has one.

    Input
    =====
    traj --- PoseTrajectory with at least 2 poses
    tol  --- Tolerance (eps_p, eps_phi)

    Output
    ======
    ScrewFitResult. The pure translation hypothesis is tried before the
    general screw. A two-pose trajectory is classified from its relative
    displacement alone.
    """
    _require_two(traj)
    result = _fit_trajectory(traj, tol)
    logger.debug("get_screw_parameters: %d poses -> %s",
                 len(traj), result.verdict)
    return result


def check_if_screw(traj, tol):
    """ True when traj is a single constant screw of either kind """
    return get_screw_parameters(traj, tol).verdict in SCREW_VERDICTS


def classify_joint(params, pitch_tol=0.03):
    """ Read a fitted screw as a joint: 'prismatic', 'revolute' (|h| within
    pitch_tol [m/rad]) or 'helical'. """
    if params.is_translation:
        return 'prismatic'
    if abs(params.pitch) <= pitch_tol:
        return 'revolute'
    return 'helical'
