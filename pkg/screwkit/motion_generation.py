""" Motion plans for new task instances.

Articulated objects: one extracted screw is replayed from a new start pose
with a new magnitude. Complex tasks: key segments (segment end poses that
fall inside an object's region of interest) are stored in that object's
frame, re-anchored on the object's new pose and joined by ScLERP between
guiding poses.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

import logging
from collections import OrderedDict, namedtuple

import numpy as np

from .dq_algebra import (NoMotionError, _position,
                         dist_p, dist_phi, screw_displacement,
                         screw_params_from_dq, sclerp_many)
from .screw_extraction import PoseTrajectory
from .segmentation import get_screw_segments

logger = logging.getLogger(__name__)


# consecutive guiding poses closer than this are merged
DUPLICATE_TOL = 1.e-9


##############################################
###                 Scene                  ###
##############################################

class RegionOfInterest(object):
    """ Sphere (radius) or axis-aligned cuboid (half extents) centred on the
    object frame origin, expressed in the object frame. """

    SHAPES = ('sphere', 'cuboid')

    def __init__(self, shape, size):
        if shape not in self.SHAPES:
            raise ValueError("Unknown ROI shape %s, expected one of %s"
                             % (shape, self.SHAPES))
        size = np.array(size, dtype=float)
        if shape == 'sphere' and size.shape != ():
            raise ValueError("A sphere ROI takes one radius, got %s" % (size,))
        if shape == 'cuboid' and size.shape != (3,):
            raise ValueError("A cuboid ROI takes 3 half extents, got %s"
                             % (size,))
        if not np.all(size > 0.) or not np.all(np.isfinite(size)):
            raise ValueError("ROI dimensions must be positive, got %s"
                             % (size,))
        size.setflags(write=False)
        self.shape = shape
        self.size = size

    @classmethod
    def sphere(cls, radius):
        return cls('sphere', radius)

    @classmethod
    def cuboid(cls, half_extents):
        return cls('cuboid', half_extents)

    @classmethod
    def cube(cls, side):
        return cls('cuboid', [0.5*side] * 3)

    def contains(self, local_point):
        local_point = np.asarray(local_point, dtype=float)
        if self.shape == 'sphere':
            return bool(np.linalg.norm(local_point) <= self.size)
        return bool(np.all(np.abs(local_point) <= self.size))

    def __repr__(self):
        return "RegionOfInterest(%s, %s)" % (self.shape, self.size.tolist())


TaskObject = namedtuple('TaskObject', ['object_id', 'pose', 'roi'])


class TaskScene(object):
    """ Task objects with unique ids, kept in the given order """

    def __init__(self, objects):
        objects = list(objects)
        ids = [o.object_id for o in objects]
        dup = sorted(set(i for i in ids if ids.count(i) > 1))
        if dup:
            raise ValueError("Duplicate object ids in scene: %s" % dup)
        self.objects = tuple(objects)
        self._by_id = dict((o.object_id, o) for o in objects)

    @property
    def ids(self):
        return [o.object_id for o in self.objects]

    def __getitem__(self, object_id):
        return self._by_id[object_id]

    def __contains__(self, object_id):
        return object_id in self._by_id

    def __iter__(self):
        return iter(self.objects)

    def __len__(self):
        return len(self.objects)

    def transformed(self, T):
        """ Scene with every object pose moved to T * O """
        return TaskScene(o._replace(pose=T * o.pose) for o in self.objects)


class TaskConstraintSet(object):
    """ Key poses of each object expressed in that object's frame.

    local_poses maps object id to O^* * G for each key segment end pose G
    in demonstration order; provenance holds the matching segment indices.
    """

    def __init__(self, local_poses, provenance):
        self.local_poses = OrderedDict(local_poses)
        self.provenance = OrderedDict(provenance)

    def visitation_order(self):
        return visitation_order(self)

    def __len__(self):
        return sum(len(v) for v in self.local_poses.values())


class GuidingPoses(object):
    """ Ordered poses D_1', GP_1', ..., GP_v', D_n' with a source label
    ('start', an object id, or 'goal') for each. """

    def __init__(self, poses, labels):
        if len(poses) != len(labels):
            raise ValueError("Got %d labels for %d guiding poses"
                             % (len(labels), len(poses)))
        if len(poses) == 0:
            raise ValueError("Guiding poses must not be empty")
        self.poses = tuple(poses)
        self.labels = tuple(labels)

    def __len__(self):
        return len(self.poses)

    def __iter__(self):
        return iter(self.poses)

    def __getitem__(self, i):
        return self.poses[i]


StepBounds = namedtuple('StepBounds', ['max_translation', 'max_rotation'])


##############################################
###          Articulated objects           ###
##############################################

def articulated_plan(params, start, magnitude, n_steps):
    """ Poses delta(k theta'/n) * start for k = 0..n along the screw params.

    magnitude is in radians for a finite pitch and meters for a pure
    translation; a negative magnitude moves backwards along the screw.
    """
    if params is None:
        raise NoMotionError("No screw to plan along")
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be positive, got %d" % n_steps)
    poses = [start]
    for k in range(1, n_steps + 1):
        delta = screw_displacement(params, magnitude * k / n_steps)
        poses.append(delta * start)
    logger.info("articulated plan: %d poses, magnitude %g", n_steps + 1,
                magnitude)
    return PoseTrajectory(poses)


##############################################
###             Complex tasks              ###
##############################################

def _owner(scene, position):
    """ Object whose ROI holds the world point, nearest origin first """
    owner, best = None, np.inf
    for obj in scene:
        local = obj.pose.conjugate().transform_point(position)
        if not obj.roi.contains(local):
            continue
        d = np.linalg.norm(position - obj.pose.position)
        if d < best:
            owner, best = obj, d
    return owner


def extract_key_segments(seg, scene):
    """ Store every segment end pose that lies in an object's ROI in the
    frame of that object. """
    if len(scene) == 0:
        raise ValueError("Scene has no objects")
    local = OrderedDict((o.object_id, []) for o in scene)
    provenance = OrderedDict((o.object_id, []) for o in scene)
    for index, s in enumerate(seg):
        obj = _owner(scene, s.end_pose.position)
        if obj is None:
            continue
        local[obj.object_id].append(obj.pose.conjugate() * s.end_pose)
        provenance[obj.object_id].append(index)
    logger.info("key segments: %s", dict((k, v) for k, v in
                                         provenance.items() if v))
    return TaskConstraintSet(local, provenance)


def visitation_order(constraints):
    """ Objects ordered by their first key segment, ties in scene order.
    Objects without key segments are left out. """
    ids = [i for i, v in constraints.provenance.items() if v]
    position = dict((i, n) for n, i in enumerate(constraints.provenance))
    return sorted(ids, key=lambda i: (constraints.provenance[i][0],
                                      position[i]))


def object_delta(O_old, O_new):
    """ O' * O^*, the rigid motion carrying an object to its new pose """
    return O_new * O_old.conjugate()


def reanchor(constraints, scene_old, scene_new):
    """ World key poses O_i' * (O_i^* * G) for the new scene, per object in
    visitation order. """
    old_ids, new_ids = set(scene_old.ids), set(scene_new.ids)
    missing = sorted(set(constraints.local_poses) - new_ids)
    unmatched = sorted(old_ids ^ new_ids)
    if missing or unmatched:
        raise ValueError("Scenes do not match; unmatched object ids: %s"
                         % sorted(set(missing) | set(unmatched)))
    out = OrderedDict()
    for object_id in visitation_order(constraints):
        O_new = scene_new[object_id].pose
        out[object_id] = [O_new * L for L in
                          constraints.local_poses[object_id]]
    return out


def _same_pose(D1, D2):
    return dist_p(D1, D2) <= DUPLICATE_TOL and \
        dist_phi(D1, D2) <= DUPLICATE_TOL


def build_guiding_poses(start, reanchored, goal):
    """ {start, GP_1', ..., GP_v', goal} with consecutive duplicates
    collapsed onto the first occurrence. """
    if isinstance(reanchored, dict):
        reanchored = reanchored.items()
    poses, labels = [start], ['start']
    candidates = [(D, object_id) for object_id, group in reanchored
                  for D in group]
    candidates.append((goal, 'goal'))
    for D, label in candidates:
        if _same_pose(poses[-1], D):
            continue
        poses.append(D)
        labels.append(label)
    return GuidingPoses(poses, labels)


def _leg_steps(Da, Db, step):
    """ Number of ScLERP steps from Da to Db under the step bounds """
    try:
        screw = screw_params_from_dq(Db * Da.conjugate())
    except NoMotionError:
        return 1
    if screw.is_translation:
        length, theta = screw.magnitude, 0.
    else:
        theta = screw.magnitude
        offset = Da.position - screw.point
        radial = offset - np.dot(offset, screw.axis) * screw.axis
        length = np.hypot(screw.translation_along_axis,
                          np.linalg.norm(radial) * theta)
    return max(1, int(np.ceil(max(length / step.max_translation,
                                  theta / step.max_rotation))))


def _check_step(step):
    step = StepBounds(*step)
    if not (step.max_translation > 0. and step.max_rotation > 0.):
        raise ValueError("Step bounds must be positive, got %s" % (step,))
    return step


def leg_step_counts(gp, step):
    """ Steps per leg between consecutive guiding poses """
    step = _check_step(step)
    return [_leg_steps(Da, Db, step) for Da, Db in zip(gp.poses[:-1],
                                                     gp.poses[1:])]


def guiding_pose_indices(gp, step):
    """ Index of every guiding pose in plan_from_guiding_poses' output """
    return [0] + np.cumsum(leg_step_counts(gp, step)).tolist()


def plan_from_guiding_poses(gp, step):
    """ ScLERP through consecutive guiding poses, each leg cut into
    ceil(max(length/max_translation, theta/max_rotation)) equal steps in tau.
    The plan passes through every guiding pose exactly. """
    first = gp.poses[0]
    rotations = [first.real[None]]
    positions = [first.position[None]]
    counts = leg_step_counts(gp, step)
    for Da, Db, k in zip(gp.poses[:-1], gp.poses[1:], counts):
        real, dual = sclerp_many(Da, Db, np.arange(1, k + 1) / float(k))
        pos = _position(real, dual)
        real[-1] = Db.real
        pos[-1] = Db.position
        rotations.append(real)
        positions.append(pos)
        logger.debug("leg with %d steps", k)
    return PoseTrajectory.from_arrays(np.concatenate(rotations),
                                      np.concatenate(positions))


TaskPlan = namedtuple('TaskPlan', ['trajectory', 'guiding_poses',
                                   'guiding_indices', 'segmentation',
                                   'constraints'])


def plan_task(demo, scene_old, scene_new, tol, step, start=None, goal=None):
    """ Segment a demonstration and replay its key segments in a new scene.

    start and goal default to the first and last demonstration poses.
    """
    seg = get_screw_segments(demo, tol)
    constraints = extract_key_segments(seg, scene_old)
    reanchored = reanchor(constraints, scene_old, scene_new)
    start = demo[0] if start is None else start
    goal = demo[len(demo) - 1] if goal is None else goal
    gp = build_guiding_poses(start, reanchored, goal)
    trajectory = plan_from_guiding_poses(gp, step)
    return TaskPlan(trajectory, gp, guiding_pose_indices(gp, step), seg,
                    constraints)
