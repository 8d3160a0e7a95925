""" Preset catalog. Named tolerances, regions of interest and step bounds.

NOTES:

(*) Tolerance presets are (eps_p [m], eps_phi [quaternion chord]). The
articulated preset suits single-joint demonstrations; complex tasks pass
through more orientation change per segment and use a looser eps_phi.

(*) Region-of-interest presets are centred on the object frame origin.
Scene files may refer to them by name instead of giving dimensions.
"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

from collections import namedtuple

from .dq_algebra import Tolerance
from .motion_generation import RegionOfInterest, StepBounds


tolerance_info = namedtuple('tolerance_info', ['eps_p', 'eps_phi', 'desc'])
roi_info = namedtuple('roi_info', ['shape', 'size', 'desc'])

### dictionary of all known tolerance presets ###
_tolerance_world = {}

_tolerance_world['articulated'] = \
  tolerance_info(0.01, 0.1,
                 '''Single constant screw demonstrations of doors, drawers
                 and other articulated objects (1 cm, 0.1).''')

_tolerance_world['complex'] = \
  tolerance_info(0.01, 0.15,
                 '''Segmentation of multi-step manipulation demonstrations
                 into constant screws (1 cm, 0.15).''')

### dictionary of all known region-of-interest presets ###
_roi_world = {}

_roi_world['container'] = \
  roi_info('sphere', 0.20,
           '''Bowls, jars and other containers scooped or poured from;
           sphere of radius 20 cm.''')

_roi_world['handheld'] = \
  roi_info('sphere', 0.15,
           '''Dishes, cups and other objects carried in the hand;
           sphere of radius 15 cm.''')

_roi_world['rack'] = \
  roi_info('cuboid', (0.225, 0.225, 0.225),
           '''Dish racks, shelves and other placement targets; cube of
           side 45 cm.''')

# default step bounds for plans: 5 mm and 0.02 rad per step
DEFAULT_STEP = StepBounds(0.005, 0.02)

# default number of steps of an articulated plan
DEFAULT_ARTICULATED_STEPS = 50


def list(verbose=False):
    """ show all presets available in the catalog """
    for name in sorted(_tolerance_world.keys()):
        info = _tolerance_world[name]
        print('tolerance %s: eps_p = %g m, eps_phi = %g'
              % (name, info.eps_p, info.eps_phi))
        if verbose:
            print("  Description: " + info.desc + '\n')
    for name in sorted(_roi_world.keys()):
        info = _roi_world[name]
        print('roi %s: %s %s' % (name, info.shape, info.size))
        if verbose:
            print("  Description: " + info.desc + '\n')


def tolerance(name):
    """ Tolerance of a named preset """
    try:
        info = _tolerance_world[name]
    except KeyError:
        raise ValueError("Unknown tolerance preset %s, known presets are %s"
                         % (name, sorted(_tolerance_world.keys())))
    return Tolerance(info.eps_p, info.eps_phi)


def roi(name):
    """ RegionOfInterest of a named preset """
    try:
        info = _roi_world[name]
    except KeyError:
        raise ValueError("Unknown ROI preset %s, known presets are %s"
                         % (name, sorted(_roi_world.keys())))
    return RegionOfInterest(info.shape, info.size)
