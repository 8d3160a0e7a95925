""" Command line interface.

    screwkit extract TRAJ            verdict and screw parameters of a demo
    screwkit segment TRAJ            constant screw segmentation
    screwkit plan-articulated IN     replay a screw from a new start pose
    screwkit plan-task DEMO OLD NEW  replay key segments in a new scene
    screwkit synth SPEC              synthetic demonstration
    screwkit validate TRAJ           check a trajectory file
    screwkit reconstruct SEG         dense trajectory from a segmentation

Exit codes: 0 success (or a constant screw verdict), 1 usage, file or
format error, 2 NotConstantScrew, 3 NoMotion.

Magnitudes and rotation bounds are radians (or meters for a pure
translation) unless suffixed with "deg". Values starting with a minus sign
must be attached to their flag, e.g. --magnitude=-45deg.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

import argparse
import logging
import os
import sys

import numpy as np

from . import catalog
from . import screwIO
from .dq_algebra import NoMotionError, Tolerance
from .motion_generation import StepBounds, articulated_plan, plan_task
from .screw_extraction import (NOT_CONSTANT_SCREW, SCREW_VERDICTS,
                               PoseTrajectory, classify_joint,
                               get_screw_parameters)
from .segmentation import reconstruct, get_screw_segments
from .synth_oracle import gen_trajectory

logger = logging.getLogger(__name__)

SEED_ENV = 'SCREWKIT_SEED'

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONSTANT = 2
EXIT_NO_MOTION = 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """ argparse exits with status 2 on bad usage, which collides with the
    NotConstantScrew exit code """

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _exit_code(verdict):
    if verdict in SCREW_VERDICTS:
        return EXIT_OK
    if verdict == NOT_CONSTANT_SCREW:
        return EXIT_NOT_CONSTANT
    return EXIT_NO_MOTION


def parse_magnitude(text):
    """ (value, in_degrees) of '0.3', '-45deg' or '-0.785' """
    text = text.strip()
    in_degrees = text.lower().endswith('deg')
    number = text[:-3] if in_degrees else text
    try:
        value = float(number)
    except ValueError:
        raise UsageError("Expected a number with an optional 'deg' suffix, "
                         "got %r" % text)
    if not np.isfinite(value):
        raise UsageError("Expected a finite number, got %r" % text)
    if in_degrees:
        value = np.deg2rad(value)
    return value, in_degrees


def parse_pose(text):
    """ Pose from 7 inline numbers 'px,py,pz,qw,qx,qy,qz' or a file holding
    a pose object or a trajectory (its first pose) """
    parts = text.replace(',', ' ').split()
    if len(parts) == 7:
        try:
            values = [float(p) for p in parts]
        except ValueError:
            values = None
        if values is not None:
            return screwIO.pose_from_dict({'position': values[:3],
                                           'orientation': values[3:]},
                                          'pose')
    if not os.path.exists(text):
        raise UsageError("Expected 7 numbers px,py,pz,qw,qx,qy,qz or a pose "
                         "file, got %r" % text)
    doc = screwIO.load_document(text)
    if 'format' in doc:
        return screwIO.trajectory_from_document(doc)[0]
    return screwIO.pose_from_dict(doc, text)


def _tolerance(args):
    return Tolerance(args.eps_p, args.eps_phi)


def _emit(doc, output):
    """ Save doc to output, or print it when no output is given """
    if output is None:
        sys.stdout.write(screwIO.dumps(doc))
    else:
        screwIO.save_document(doc, output)
        logger.info("wrote %s", output)


def _fmt(v):
    return '[' + ', '.join(repr(float(x)) for x in v) + ']'


##############################################
###               Commands                 ###
##############################################

def cmd_extract(args):
    traj = screwIO.load_trajectory(args.trajectory)
    tol = _tolerance(args)
    fit = get_screw_parameters(traj, tol)
    joint = None if fit.params is None else classify_joint(fit.params)
    report = screwIO.screw_report(fit.verdict, fit.params, tol, joint)
    if args.output is not None:
        screwIO.save_document(report, args.output)
    if args.json:
        sys.stdout.write(screwIO.dumps(report))
    else:
        print("verdict: %s" % fit.verdict)
        s = fit.params
        if s is not None:
            print("joint: %s" % joint)
            print("axis: %s" % _fmt(s.axis))
            print("moment: %s" % _fmt(s.moment))
            if s.is_translation:
                print("magnitude: %r m" % s.magnitude)
                print("pitch: infinite")
            else:
                print("magnitude: %r rad (%r deg)"
                      % (s.magnitude, float(np.rad2deg(s.magnitude))))
                print("pitch: %r m/rad" % s.pitch)
        res = fit.residuals
        print("max residuals: d_p = %r m, d_phi = %r"
              % (float(res[:, 0].max()), float(res[:, 1].max())))
    return _exit_code(fit.verdict)


def cmd_segment(args):
    traj = screwIO.load_trajectory(args.trajectory)
    seg = get_screw_segments(traj, _tolerance(args))
    doc = screwIO.segmentation_to_document(seg)
    if args.output is not None:
        screwIO.save_document(doc, args.output)
    if args.json or args.output is None:
        sys.stdout.write(screwIO.dumps(doc))
    else:
        print("segments: %d" % seg.count)
        for s in seg:
            print("  [%d, %d] %s" % (s.start_index, s.end_index, s.verdict))
    return EXIT_OK


def cmd_plan_articulated(args):
    doc = screwIO.load_document(args.input)
    tolerance, demo_start = None, None
    if doc.get('format') == screwIO.SCREW_FORMAT:
        params = screwIO.screw_from_report(doc)
        if params is None:
            raise NoMotionError("%s holds no screw (verdict %s)"
                                % (args.input, doc.get('verdict')))
    else:
        traj = screwIO.trajectory_from_document(doc)
        tolerance = _tolerance(args)
        fit = get_screw_parameters(traj, tolerance)
        if fit.params is None:
            logger.error("demonstration is not one constant screw: %s",
                         fit.verdict)
            return _exit_code(fit.verdict)
        params, demo_start = fit.params, traj[0]

    if args.start is not None:
        start = parse_pose(args.start)
    elif demo_start is not None:
        start = demo_start
    else:
        raise UsageError("--start is required when planning from a screw "
                         "file")

    if args.magnitude is None:
        magnitude = params.magnitude
    else:
        magnitude, in_degrees = parse_magnitude(args.magnitude)
        if in_degrees and params.is_translation:
            raise UsageError("A prismatic screw takes a magnitude in meters, "
                             "got %s" % args.magnitude)

    if magnitude == 0.:
        plan = PoseTrajectory([start])
        indices = [0]
    else:
        plan = articulated_plan(params, start, magnitude, args.steps)
        indices = [0, args.steps]
    _emit(screwIO.plan_to_document(plan, 'articulated',
                                   screwIO.file_sha256(args.input),
                                   tolerance, guiding_indices=indices),
          args.output)
    return EXIT_OK


def cmd_plan_task(args):
    demo = screwIO.load_trajectory(args.demo)
    scene_old = screwIO.load_scene(args.old_scene)
    scene_new = screwIO.load_scene(args.new_scene)
    start = None if args.start is None else parse_pose(args.start)
    goal = None if args.goal is None else parse_pose(args.goal)
    step = StepBounds(args.max_translation,
                      parse_magnitude(args.max_rotation)[0])
    tol = _tolerance(args)
    plan = plan_task(demo, scene_old, scene_new, tol, step, start, goal)
    _emit(screwIO.plan_to_document(plan.trajectory, 'task',
                                   screwIO.file_sha256(args.demo), tol,
                                   plan.guiding_poses.poses,
                                   plan.guiding_indices),
          args.output)
    return EXIT_OK


def cmd_synth(args):
    spec = screwIO.load_synth_spec(args.spec)
    seed = os.environ.get(SEED_ENV)
    if seed is not None:
        try:
            spec = spec.with_seed(int(seed))
        except ValueError:
            raise UsageError("%s must be an integer, got %r"
                             % (SEED_ENV, seed))
        logger.info("seed %s from %s", seed, SEED_ENV)
    traj, truth = gen_trajectory(spec)
    _emit(screwIO.trajectory_to_document(traj), args.output)
    if args.truth is not None:
        screwIO.save_segmentation(truth, args.truth)
    return EXIT_OK


def cmd_validate(args):
    doc = screwIO.load_document(args.trajectory)
    problems = screwIO.validate_trajectory_document(doc)
    for p in problems:
        print(p)
    if problems:
        return EXIT_ERROR
    n = len(doc['poses']) if 'poses' in doc else \
        len(doc['joint_space']['joint_values'])
    print("ok: %d poses" % n)
    return EXIT_OK


def cmd_reconstruct(args):
    seg = screwIO.load_segmentation(args.segmentation)
    _emit(screwIO.trajectory_to_document(reconstruct(seg, args.samples)),
          args.output)
    return EXIT_OK


##############################################
###                Parser                  ###
##############################################

def _add_tolerance(p, preset):
    tol = catalog.tolerance(preset)
    p.add_argument('--eps-p', type=float, default=tol.eps_p,
                   help="position tolerance in meters (default %(default)s)")
    p.add_argument('--eps-phi', type=float, default=tol.eps_phi,
                   help="orientation tolerance, quaternion chord "
                        "(default %(default)s)")


def build_parser():
    parser = _Parser(prog='screwkit',
                     description="Constant screw extraction, segmentation "
                                 "and motion planning from demonstrations")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress, -vv for debug output")
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('extract', help="screw parameters of a demonstration")
    p.add_argument('trajectory')
    _add_tolerance(p, 'articulated')
    p.add_argument('-o', '--output', help="write a screw file")
    p.add_argument('--json', action='store_true',
                   help="print the machine-readable report")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser('segment', help="segment into constant screws")
    p.add_argument('trajectory')
    _add_tolerance(p, 'complex')
    p.add_argument('-o', '--output', help="segmentation file")
    p.add_argument('--json', action='store_true',
                   help="print the segmentation document")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser('plan-articulated',
                       help="plan along a screw from a new start pose")
    p.add_argument('input', help="screw file or demonstration")
    p.add_argument('--start', help="start pose, px,py,pz,qw,qx,qy,qz or file")
    p.add_argument('--magnitude',
                   help="radians (or 'deg' suffix), meters for prismatic")
    p.add_argument('--steps', type=int,
                   default=catalog.DEFAULT_ARTICULATED_STEPS)
    _add_tolerance(p, 'articulated')
    p.add_argument('-o', '--output', help="plan file")
    p.set_defaults(func=cmd_plan_articulated)

    p = sub.add_parser('plan-task', help="plan a task in a new scene")
    p.add_argument('demo')
    p.add_argument('old_scene')
    p.add_argument('new_scene')
    p.add_argument('--start', help="start pose (default: first demo pose)")
    p.add_argument('--goal', help="goal pose (default: last demo pose)")
    _add_tolerance(p, 'complex')
    p.add_argument('--max-translation', type=float,
                   default=catalog.DEFAULT_STEP.max_translation,
                   help="meters per step (default %(default)s)")
    p.add_argument('--max-rotation',
                   default=repr(catalog.DEFAULT_STEP.max_rotation),
                   help="radians per step, or 'deg' suffix "
                        "(default %(default)s)")
    p.add_argument('-o', '--output', help="plan file")
    p.set_defaults(func=cmd_plan_task)

    p = sub.add_parser('synth', help="synthetic demonstration")
    p.add_argument('spec')
    p.add_argument('-o', '--output', help="trajectory file")
    p.add_argument('--truth', help="ground truth segmentation file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser('validate', help="check a trajectory file")
    p.add_argument('trajectory')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('reconstruct',
                       help="dense trajectory from a segmentation")
    p.add_argument('segmentation')
    p.add_argument('--samples', type=int, default=10,
                   help="steps per segment (default %(default)s)")
    p.add_argument('-o', '--output', help="trajectory file")
    p.set_defaults(func=cmd_reconstruct)
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity,
                                                      logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('screwkit').setLevel(level)
    logging.captureWarnings(True)


def main(argv=None):
    """ Run the command line; returns the exit code """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write("screwkit: error: %s\n" % e)
        return EXIT_ERROR
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_ERROR
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except NoMotionError as e:
        sys.stderr.write("screwkit: no motion: %s\n" % e)
        return EXIT_NO_MOTION
    except (ValueError, EnvironmentError) as e:
        sys.stderr.write("screwkit: error: %s\n" % e)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
