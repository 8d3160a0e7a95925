""" Greedy segmentation of a pose trajectory into constant screws.

The window [i, j] grows while it remains one constant screw. When pose j
breaks the fit, the segment [i, j-1] is emitted and the next window starts
at its end pose, so consecutive segments share a boundary pose and the
segments tile the trajectory.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

import logging
from collections import namedtuple

import numpy as np

from .dq_algebra import _position, sclerp_many
from .screw_extraction import (SCREW_VERDICTS, NO_MOTION, PoseTrajectory,
                               _fit_window, get_screw_parameters)

logger = logging.getLogger(__name__)


ResidualStats = namedtuple('ResidualStats',
                           ['max_p', 'mean_p', 'max_phi', 'mean_phi'])


def residual_stats(residuals):
    """ Max and mean (d_p, d_phi) over a (n, 2) residual array """
    res = np.asarray(residuals, dtype=float)
    return ResidualStats(float(res[:, 0].max()), float(res[:, 0].mean()),
                         float(res[:, 1].max()), float(res[:, 1].mean()))


class ScrewSegment(namedtuple('ScrewSegment',
                              ['start_index', 'end_index', 'start_pose',
                               'end_pose', 'verdict', 'params',
                               'residual_stats'])):
    """ Poses start_index..end_index (inclusive, 0-based) of one constant
    screw. params is None only for a NoMotion (dwell) segment. """

    __slots__ = ()

    def __new__(cls, start_index, end_index, start_pose, end_pose, verdict,
                params, residual_stats):
        if not 0 <= start_index < end_index:
            raise ValueError("Segment indices must satisfy 0 <= start < end,"
                             " got [%s, %s]" % (start_index, end_index))
        return super(ScrewSegment, cls).__new__(
            cls, int(start_index), int(end_index), start_pose, end_pose,
            verdict, params, residual_stats)


class Segmentation(object):
    """ Ordered ScrewSegments tiling poses 0..source_length-1 """

    def __init__(self, segments, source_length, tolerance=None):
        segments = list(segments)
        if len(segments) == 0:
            raise ValueError("A segmentation needs at least one segment")
        if segments[0].start_index != 0:
            raise ValueError("First segment must start at pose 0, got %d"
                             % segments[0].start_index)
        for prev, seg in zip(segments[:-1], segments[1:]):
            if seg.start_index != prev.end_index:
                raise ValueError("Segment starting at %d does not continue "
                                 "the one ending at %d"
                                 % (seg.start_index, prev.end_index))
        if segments[-1].end_index != source_length - 1:
            raise ValueError("Last segment ends at %d but the source has %d "
                             "poses" % (segments[-1].end_index, source_length))
        self.segments = tuple(segments)
        self.source_length = int(source_length)
        self.tolerance = tolerance

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, i):
        return self.segments[i]

    @property
    def count(self):
        return len(self.segments)

    @property
    def breakpoints(self):
        """ End index of every segment but the last """
        return [seg.end_index for seg in self.segments[:-1]]

    @property
    def end_poses(self):
        return [seg.end_pose for seg in self.segments]

    def __repr__(self):
        return "Segmentation(u=%d, n=%d, ends=%s)" % (
            self.count, self.source_length,
            [seg.end_index for seg in self.segments])


def _accepts(fit, tol):
    """ A window is kept when it is one screw, or a dwell whose poses all
    stay in the neighbourhood of the anchor. """
    if fit.verdict in SCREW_VERDICTS:
        return True
    if fit.verdict == NO_MOTION:
        return bool(np.all(fit.residuals[:, 0] <= tol.eps_p)
                    and np.all(fit.residuals[:, 1] <= tol.eps_phi))
    return False


def _segment(traj, i, j, fit):
    return ScrewSegment(i, j, traj[i], traj[j], fit.verdict, fit.params,
                        residual_stats(fit.residuals))


def _greedy(traj, tol, fit_window):
    n = len(traj)
    if n < 2:
        raise ValueError("Segmentation needs at least 2 poses, got %d" % n)
    segments = []
    i = 0
    while True:
        accepted = None
        for j in range(i + 1, n):
            fit = fit_window(i, j)
            if not _accepts(fit, tol):
                break
            accepted = (j, fit)
        # a two-pose window always passes, so accepted is set here
        end, fit = accepted
        segments.append(_segment(traj, i, end, fit))
        logger.debug("segment [%d, %d] %s", i, end, fit.verdict)
        if end == n - 1:
            break
        i = end
    logger.info("segmented %d poses into %d constant screws", n,
                len(segments))
    return Segmentation(segments, n, tol)


def get_screw_segments(traj, tol):
    """ Greedy longest-prefix segmentation into constant screws.

    Relative displacements to the current anchor are computed once per
    anchor and each growing window stops its sweep at the first pose that
    leaves the tolerance. The result equals get_screw_segments_naive.
    """
    cache = {}

    def fit_window(i, j):
        if i not in cache:
            cache.clear()
            cache[i] = traj.relative_to(i)
        rel_real, rel_dual = cache[i]
        return _fit_window(rel_real[:j-i+1], rel_dual[:j-i+1],
                           traj.positions[i:j+1], tol, stop_early=True)

    return _greedy(traj, tol, fit_window)


def get_screw_segments_naive(traj, tol):
    """ Direct transcription: every window is fitted from scratch """
    return _greedy(traj, tol,
                   lambda i, j: get_screw_parameters(traj.window(i, j), tol))


def reconstruct(seg, samples_per_segment):
    """ Dense ScLERP trajectory through D_1, E_1, ..., E_u with
    samples_per_segment steps per segment. """
    k = int(samples_per_segment)
    if k != samples_per_segment or k < 1:
        raise ValueError("samples_per_segment must be a positive integer, "
                         "got %s" % (samples_per_segment,))
    first = seg.segments[0].start_pose
    rotations = [first.real[None]]
    positions = [first.position[None]]
    taus = np.linspace(0., 1., k + 1)[1:]
    for s in seg:
        real, dual = sclerp_many(s.start_pose, s.end_pose, taus)
        pos = _position(real, dual)
        real[-1] = s.end_pose.real
        pos[-1] = s.end_pose.position
        rotations.append(real)
        positions.append(pos)
    return PoseTrajectory.from_arrays(np.concatenate(rotations),
                                      np.concatenate(positions))
