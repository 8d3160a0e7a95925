""" Basic IO functionality for trajectories, scenes, segmentations and plans """

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

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

import hashlib
import json
import warnings
from collections import namedtuple

import numpy as np

from . import catalog
from .dq_algebra import (DualQuaternion, ScrewParams, SerialChain, Tolerance,
                         UNIT_TOL, RENORM_TOL, dq_from_matrix,
                         dq_to_matrix, fk_poe)
from .h5document import is_h5_path, load_h5, save_h5
from .motion_generation import RegionOfInterest, TaskObject, TaskScene
from .screw_extraction import PoseTrajectory, VERDICTS
from .segmentation import ResidualStats, ScrewSegment, Segmentation
from .synth_oracle import SynthLeg, SynthSpec

document_description = """* Description of documents:

    Every document is a JSON object (or the same tree in an h5 file) with

      format   -- one of screwkit.trajectory, screwkit.scene,
                  screwkit.segmentation, screwkit.plan, screwkit.screw,
                  screwkit.synth
      version  -- integer format version, currently 1

* Pose encodings:

      {"position": [x, y, z], "orientation": [w, x, y, z]}  (meters, unit
                  quaternion; within 1e-6 of unit norm it is renormalized
                  with a warning)
      {"matrix": [16 numbers]}   row-major homogeneous matrix

* Trajectory documents:

      poses        -- list of poses, all with the same encoding
      timestamps   -- (Optional) strictly increasing seconds
      joint_space  -- (Instead of poses) {"chain": {"joints": [screws],
                      "home": pose}, "joint_values": [[q_1, ..., q_k], ...]}

* Screws:

      {"axis": [3], "moment": [3] (or "point": [3]),
       "pitch": {"finite": h} or {"infinite": true}, "magnitude": theta}

* Scenes:

      objects -- list of {"id": str, "pose": pose, "roi": {"sphere": r} or
                 {"cuboid": [hx, hy, hz]} or {"preset": name}}

* Segmentations:

      source_length, tolerance {"eps_p", "eps_phi"}, segments: list of
      {"start_index", "end_index", "verdict", "start_pose", "end_pose",
       "screw" (or null), "residuals": {"max_p", "mean_p", "max_phi",
       "mean_phi"}}

* Plans: a trajectory document plus

      kind           -- "articulated" or "task"
      provenance     -- {"source_sha256", "tolerance", "guiding_pose_indices"}
      guiding_poses  -- list of poses (task plans)
"""

FORMAT_VERSION = 1

TRAJECTORY_FORMAT = 'screwkit.trajectory'
SCENE_FORMAT = 'screwkit.scene'
SEGMENTATION_FORMAT = 'screwkit.segmentation'
PLAN_FORMAT = 'screwkit.plan'
SCREW_FORMAT = 'screwkit.screw'
SYNTH_FORMAT = 'screwkit.synth'


class FormatError(ValueError):
    """ A document that does not match its format; where names the field """

    def __init__(self, message, where=None):
        self.where = where
        if where:
            message = "%s: %s" % (where, message)
        super(FormatError, self).__init__(message)


MotionPlan = namedtuple('MotionPlan', ['trajectory', 'kind', 'provenance',
                                       'guiding_poses'])


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def _field(d, key, where):
    if not isinstance(d, dict):
        raise FormatError("expected an object, got %s" % type(d).__name__,
                          where)
    if key not in d:
        raise FormatError("missing field '%s'" % key, where)
    return d[key]


def _numbers(v, n, where):
    """ v as a float array of n entries """
    if not isinstance(v, list) or len(v) != n or \
       not all(isinstance(x, (int, float)) and not isinstance(x, bool)
               for x in v):
        raise FormatError("expected a list of %d numbers, got %r" % (n, v),
                          where)
    arr = np.array(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise FormatError("non-finite value in %r" % (v,), where)
    return arr


def _number(v, where):
    return float(_numbers([v], 1, where)[0])


def _check_format(doc, formats, where=''):
    fmt = _field(doc, 'format', where)
    if fmt not in formats:
        raise FormatError("expected format %s, got %r"
                          % (' or '.join(formats), fmt), where)
    version = doc.get('version', FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise FormatError("unsupported version %r" % (version,), where)


def _header(fmt):
    return {'format': fmt, 'version': FORMAT_VERSION}


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def pose_to_dict(D, encoding='quaternion'):
    if encoding == 'matrix':
        return {'matrix': dq_to_matrix(D).ravel().tolist()}
    return {'position': np.asarray(D.position).tolist(),
            'orientation': np.asarray(D.real).tolist()}


def _orientation(v, where):
    q = _numbers(v, 4, where)
    n = np.linalg.norm(q)
    if abs(n - 1.) > RENORM_TOL:
        raise FormatError("orientation norm %.12g is not 1" % n, where)
    if abs(n - 1.) > UNIT_TOL:
        warnings.warn("%s: renormalizing orientation with norm %.12g"
                      % (where, n))
        q = q / n
    return q


def pose_from_dict(d, where='pose'):
    if isinstance(d, dict) and 'matrix' in d:
        try:
            return dq_from_matrix(_numbers(d['matrix'], 16, where + '.matrix'))
        except FormatError:
            raise
        except ValueError as e:
            raise FormatError(str(e), where + '.matrix')
    q = _orientation(_field(d, 'orientation', where), where + '.orientation')
    p = _numbers(_field(d, 'position', where), 3, where + '.position')
    return DualQuaternion.from_pose(q, p)


def pitch_to_dict(pitch):
    if np.isinf(pitch):
        return {'infinite': True}
    return {'finite': float(pitch)}


def pitch_from_dict(v, where='pitch'):
    if v == 'infinite' or (isinstance(v, dict) and v.get('infinite') is True):
        return np.inf
    if isinstance(v, dict) and 'finite' in v:
        return _number(v['finite'], where + '.finite')
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return _number(v, where)
    raise FormatError("expected {\"finite\": h} or {\"infinite\": true}, "
                      "got %r" % (v,), where)


def screw_to_dict(params):
    return {'axis': params.axis.tolist(),
            'moment': params.moment.tolist(),
            'pitch': pitch_to_dict(params.pitch),
            'magnitude': float(params.magnitude)}


def screw_from_dict(d, where='screw'):
    axis = _numbers(_field(d, 'axis', where), 3, where + '.axis')
    pitch = pitch_from_dict(_field(d, 'pitch', where), where + '.pitch')
    magnitude = _number(d.get('magnitude', 1.), where + '.magnitude')
    try:
        if 'point' in d and 'moment' not in d:
            point = _numbers(d['point'], 3, where + '.point')
            return ScrewParams.from_point(axis, point, pitch, magnitude)
        moment = np.zeros(3) if np.isinf(pitch) else \
            _numbers(_field(d, 'moment', where), 3, where + '.moment')
        return ScrewParams(axis, moment, pitch, magnitude)
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e), where)


def tolerance_to_dict(tol):
    if tol is None:
        return None
    return {'eps_p': tol.eps_p, 'eps_phi': tol.eps_phi}


def tolerance_from_dict(d, where='tolerance'):
    if d is None:
        return None
    try:
        return Tolerance(_number(_field(d, 'eps_p', where), where + '.eps_p'),
                         _number(_field(d, 'eps_phi', where),
                                 where + '.eps_phi'))
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e), where)


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def trajectory_to_document(traj, encoding='quaternion', fmt=TRAJECTORY_FORMAT):
    doc = _header(fmt)
    if encoding == 'matrix':
        doc['poses'] = [pose_to_dict(D, 'matrix') for D in traj]
    else:
        doc['poses'] = [{'position': p.tolist(), 'orientation': q.tolist()}
                        for q, p in zip(traj.rotations, traj.positions)]
    if traj.timestamps is not None:
        doc['timestamps'] = traj.timestamps.tolist()
    return doc


def _encoding(pose, where):
    if isinstance(pose, dict) and 'matrix' in pose:
        return 'matrix'
    return 'quaternion'


def _joint_space(block, where):
    chain = _field(block, 'chain', where)
    joints = _field(chain, 'joints', where + '.chain')
    if not isinstance(joints, list):
        raise FormatError("expected a list of joint screws",
                          where + '.chain.joints')
    joints = [screw_from_dict(j, '%s.chain.joints[%d]' % (where, i))
              for i, j in enumerate(joints)]
    home = pose_from_dict(_field(chain, 'home', where + '.chain'),
                          where + '.chain.home')
    chain = SerialChain(joints, home)
    values = _field(block, 'joint_values', where)
    if not isinstance(values, list) or len(values) == 0:
        raise FormatError("expected a non-empty list of joint value lists",
                          where + '.joint_values')
    return [fk_poe(chain, _numbers(q, len(joints),
                                   '%s.joint_values[%d]' % (where, i)))
            for i, q in enumerate(values)]


def trajectory_from_document(doc, where=''):
    """ PoseTrajectory of a trajectory or plan document """
    _check_format(doc, (TRAJECTORY_FORMAT, PLAN_FORMAT), where)
    has_poses, has_joints = 'poses' in doc, 'joint_space' in doc
    if has_poses == has_joints:
        raise FormatError("expected exactly one of 'poses' or 'joint_space'",
                          where or None)
    if has_joints:
        poses = _joint_space(doc['joint_space'], 'joint_space')
        rotations = [D.real for D in poses]
        positions = [D.position for D in poses]
    else:
        raw = doc['poses']
        if not isinstance(raw, list) or len(raw) == 0:
            raise FormatError("empty pose list", 'poses')
        encoding = _encoding(raw[0], 'poses[0]')
        rotations, positions = [], []
        for i, d in enumerate(raw):
            where_i = 'poses[%d]' % i
            if _encoding(d, where_i) != encoding:
                raise FormatError("pose encoding differs from poses[0] (%s)"
                                  % encoding, where_i)
            if encoding == 'matrix':
                D = pose_from_dict(d, where_i)
                rotations.append(D.real)
                positions.append(D.position)
            else:
                rotations.append(_orientation(
                    _field(d, 'orientation', where_i),
                    where_i + '.orientation'))
                positions.append(_numbers(_field(d, 'position', where_i), 3,
                                          where_i + '.position'))
    timestamps = doc.get('timestamps')
    if timestamps is not None:
        timestamps = _numbers(timestamps, len(rotations), 'timestamps')
    try:
        return PoseTrajectory.from_arrays(rotations, positions, timestamps)
    except ValueError as e:
        raise FormatError(str(e), where or None)


def validate_trajectory_document(doc):
    """ List of problems found in a trajectory document (empty when valid).

    Unlike trajectory_from_document this reports every problem and treats
    a non-unit orientation as a problem instead of renormalizing it.
    """
    problems = []
    if not isinstance(doc, dict):
        return ["document: expected an object"]
    if doc.get('format') not in (TRAJECTORY_FORMAT, PLAN_FORMAT):
        problems.append("format: expected %s, got %r"
                        % (TRAJECTORY_FORMAT, doc.get('format')))
    poses = doc.get('poses')
    if 'joint_space' in doc:
        try:
            _joint_space(doc['joint_space'], 'joint_space')
        except ValueError as e:
            problems.append(str(e))
        if poses is not None:
            problems.append("document: both 'poses' and 'joint_space' given")
        poses = []
    elif not isinstance(poses, list) or len(poses) == 0:
        problems.append("poses: empty or missing pose list")
        poses = []
    encoding = _encoding(poses[0], 'poses[0]') if poses else None
    for i, d in enumerate(poses):
        where = 'poses[%d]' % i
        if _encoding(d, where) != encoding:
            problems.append("%s: pose encoding differs from poses[0]" % where)
            continue
        try:
            if encoding == 'matrix':
                dq_from_matrix(_numbers(_field(d, 'matrix', where), 16,
                                        where + '.matrix'))
                continue
            _numbers(_field(d, 'position', where), 3, where + '.position')
            q = _numbers(_field(d, 'orientation', where), 4,
                         where + '.orientation')
            if abs(np.linalg.norm(q) - 1.) > UNIT_TOL:
                problems.append("%s.orientation: norm %.12g is not 1"
                                % (where, np.linalg.norm(q)))
        except ValueError as e:
            problems.append(str(e))
    timestamps = doc.get('timestamps')
    if timestamps is not None:
        try:
            t = _numbers(timestamps, len(poses), 'timestamps')
            bad = np.flatnonzero(np.diff(t) <= 0.)
            if len(bad) > 0:
                problems.append("timestamps[%d]: not strictly increasing"
                                % (bad[0] + 1))
        except FormatError as e:
            problems.append(str(e))
    return problems


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def _roi_to_dict(roi):
    if roi.shape == 'sphere':
        return {'sphere': float(roi.size)}
    return {'cuboid': roi.size.tolist()}


def _roi_from_dict(d, where):
    try:
        if isinstance(d, dict) and 'preset' in d:
            return catalog.roi(d['preset'])
        if isinstance(d, dict) and 'sphere' in d:
            return RegionOfInterest.sphere(_number(d['sphere'],
                                                   where + '.sphere'))
        if isinstance(d, dict) and 'cuboid' in d:
            return RegionOfInterest.cuboid(_numbers(d['cuboid'], 3,
                                                    where + '.cuboid'))
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e), where)
    raise FormatError("expected {\"sphere\": r}, {\"cuboid\": [hx, hy, hz]}"
                      " or {\"preset\": name}, got %r" % (d,), where)


def scene_to_document(scene):
    doc = _header(SCENE_FORMAT)
    doc['objects'] = [{'id': o.object_id, 'pose': pose_to_dict(o.pose),
                       'roi': _roi_to_dict(o.roi)} for o in scene]
    return doc


def scene_from_document(doc):
    _check_format(doc, (SCENE_FORMAT,))
    raw = _field(doc, 'objects', '')
    if not isinstance(raw, list):
        raise FormatError("expected a list of objects", 'objects')
    objects = []
    for i, d in enumerate(raw):
        where = 'objects[%d]' % i
        object_id = _field(d, 'id', where)
        if not isinstance(object_id, str):
            raise FormatError("object id must be a string", where + '.id')
        objects.append(TaskObject(
            object_id, pose_from_dict(_field(d, 'pose', where),
                                      where + '.pose'),
            _roi_from_dict(_field(d, 'roi', where), where + '.roi')))
    try:
        return TaskScene(objects)
    except ValueError as e:
        raise FormatError(str(e), 'objects')


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def segmentation_to_document(seg):
    doc = _header(SEGMENTATION_FORMAT)
    doc['source_length'] = seg.source_length
    doc['tolerance'] = tolerance_to_dict(seg.tolerance)
    doc['segments'] = [
        {'start_index': s.start_index,
         'end_index': s.end_index,
         'verdict': s.verdict,
         'start_pose': pose_to_dict(s.start_pose),
         'end_pose': pose_to_dict(s.end_pose),
         'screw': None if s.params is None else screw_to_dict(s.params),
         'residuals': dict(s.residual_stats._asdict())}
        for s in seg]
    return doc


def segmentation_from_document(doc):
    _check_format(doc, (SEGMENTATION_FORMAT,))
    raw = _field(doc, 'segments', '')
    if not isinstance(raw, list) or len(raw) == 0:
        raise FormatError("expected a non-empty list of segments", 'segments')
    segments = []
    for i, d in enumerate(raw):
        where = 'segments[%d]' % i
        verdict = _field(d, 'verdict', where)
        if verdict not in VERDICTS:
            raise FormatError("unknown verdict %r" % (verdict,),
                              where + '.verdict')
        screw = _field(d, 'screw', where)
        res = _field(d, 'residuals', where)
        try:
            segments.append(ScrewSegment(
                _field(d, 'start_index', where), _field(d, 'end_index', where),
                pose_from_dict(_field(d, 'start_pose', where),
                               where + '.start_pose'),
                pose_from_dict(_field(d, 'end_pose', where),
                               where + '.end_pose'),
                verdict,
                None if screw is None else screw_from_dict(screw,
                                                           where + '.screw'),
                ResidualStats(*[_number(_field(res, k, where + '.residuals'),
                                        where + '.residuals.' + k)
                                for k in ResidualStats._fields])))
        except FormatError:
            raise
        except (ValueError, TypeError) as e:
            raise FormatError(str(e), where)
    try:
        return Segmentation(segments, _field(doc, 'source_length', ''),
                            tolerance_from_dict(doc.get('tolerance')))
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e), 'segments')


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def plan_to_document(traj, kind, source_sha256=None, tolerance=None,
                     guiding_poses=None, guiding_indices=None):
    doc = trajectory_to_document(traj, fmt=PLAN_FORMAT)
    doc['kind'] = kind
    doc['provenance'] = {
        'source_sha256': source_sha256,
        'tolerance': tolerance_to_dict(tolerance),
        'guiding_pose_indices': None if guiding_indices is None
        else [int(i) for i in guiding_indices]}
    if guiding_poses is not None:
        doc['guiding_poses'] = [pose_to_dict(D) for D in guiding_poses]
    return doc


def plan_from_document(doc):
    _check_format(doc, (PLAN_FORMAT,))
    traj = trajectory_from_document(doc)
    gp = doc.get('guiding_poses')
    if gp is not None:
        gp = [pose_from_dict(d, 'guiding_poses[%d]' % i)
              for i, d in enumerate(gp)]
    return MotionPlan(traj, doc.get('kind'), doc.get('provenance'), gp)


def screw_report(verdict, params, tolerance, joint=None):
    """ Document of an extraction result """
    doc = _header(SCREW_FORMAT)
    doc['verdict'] = verdict
    doc['screw'] = None if params is None else screw_to_dict(params)
    doc['tolerance'] = tolerance_to_dict(tolerance)
    if joint is not None:
        doc['joint'] = joint
    return doc


def screw_from_report(doc):
    _check_format(doc, (SCREW_FORMAT,))
    screw = _field(doc, 'screw', '')
    if screw is None:
        return None
    return screw_from_dict(screw)


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def synth_spec_to_document(spec):
    doc = _header(SYNTH_FORMAT)
    doc['start'] = pose_to_dict(spec.start)
    doc['noise'] = {'sigma_p': spec.sigma_p, 'sigma_phi': spec.sigma_phi}
    doc['seed'] = spec.seed
    doc['legs'] = [{'screw': screw_to_dict(leg.screw),
                    'magnitude': leg.magnitude,
                    'samples': leg.samples} for leg in spec.legs]
    return doc


def synth_spec_from_document(doc):
    if 'format' in doc:
        _check_format(doc, (SYNTH_FORMAT,))
    raw = _field(doc, 'legs', '')
    if not isinstance(raw, list) or len(raw) == 0:
        raise FormatError("expected a non-empty list of legs", 'legs')
    legs = []
    for i, d in enumerate(raw):
        where = 'legs[%d]' % i
        samples = _field(d, 'samples', where)
        if not isinstance(samples, int) or isinstance(samples, bool) or \
           samples < 2:
            raise FormatError("samples must be an integer >= 2",
                              where + '.samples')
        legs.append(SynthLeg(screw_from_dict(_field(d, 'screw', where),
                                             where + '.screw'),
                             _number(_field(d, 'magnitude', where),
                                     where + '.magnitude'),
                             samples))
    start = doc.get('start')
    start = None if start is None else pose_from_dict(start, 'start')
    noise = doc.get('noise')
    if noise is None:
        noise = {}
    elif not isinstance(noise, dict):
        raise FormatError("expected an object with sigma_p and sigma_phi",
                          'noise')
    seed = doc.get('seed', 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise FormatError("seed must be an integer", 'seed')
    try:
        return SynthSpec(legs, start,
                         _number(noise.get('sigma_p', 0.), 'noise.sigma_p'),
                         _number(noise.get('sigma_phi', 0.),
                                 'noise.sigma_phi'),
                         seed)
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e), 'noise')


#!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!
def dumps(doc):
    """ Canonical JSON text; floats use the shortest exact representation """
    return json.dumps(doc, indent=2) + '\n'


def save_document(doc, filename):
    """ Write doc as JSON, or as h5 for .h5/.hdf5 file names """
    if is_h5_path(filename):
        save_h5(doc, filename, overwrite=True)
        return
    with open(filename, 'w') as f:
        f.write(dumps(doc))


def load_document(filename):
    if is_h5_path(filename):
        return load_h5(filename)
    with open(filename, 'r') as f:
        text = f.read()
    try:
        doc = json.loads(text)
    except ValueError as e:
        lineno = getattr(e, 'lineno', None)
        if lineno is not None:
            raise FormatError("line %d column %d: %s"
                              % (lineno, e.colno, e.msg), filename)
        raise FormatError(str(e), filename)
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object at the top level", filename)
    return doc


def file_sha256(filename):
    h = hashlib.sha256()
    with open(filename, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            h.update(chunk)
    return h.hexdigest()


def load_trajectory(filename):
    return trajectory_from_document(load_document(filename))


def save_trajectory(traj, filename, encoding='quaternion'):
    save_document(trajectory_to_document(traj, encoding), filename)


def load_scene(filename):
    return scene_from_document(load_document(filename))


def save_scene(scene, filename):
    save_document(scene_to_document(scene), filename)


def load_segmentation(filename):
    return segmentation_from_document(load_document(filename))


def save_segmentation(seg, filename):
    save_document(segmentation_to_document(seg), filename)


def load_plan(filename):
    return plan_from_document(load_document(filename))


def load_synth_spec(filename):
    return synth_spec_from_document(load_document(filename))
