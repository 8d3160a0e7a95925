"""screwkit
   ========

Provides
  1. Dual quaternion and screw algebra (log/exp, ScLERP, product of
     exponentials forward kinematics)
  2. Constant screw extraction and segmentation of recorded end-effector
     trajectories
  3. Motion plans for new task instances, articulated objects and
     multi-step tasks alike
  4. Synthetic demonstrations with known screw structure for testing


Example usage
-------------

  import screwkit as sk
  traj = sk.screwIO.load_trajectory('door.json')
  fit = sk.get_screw_parameters(traj, sk.catalog.tolerance('articulated'))
  plan = sk.articulated_plan(fit.params, traj[0], -0.785, 50)

The same pipeline is available on the command line as `screwkit`.


Pose conventions
----------------

1) A pose is a unit dual quaternion D = P + eps Q with real part P the
   orientation ([w, x, y, z]) and Q = 1/2 (0, p) P for position p in meters.

2) A screw is (axis, moment, pitch, magnitude). The magnitude is an angle
   in radians for a finite pitch and a distance in meters for a pure
   translation (pitch infinite, moment zero).

3) Distances between poses are d_p (Euclidean position distance, meters)
   and d_phi (quaternion chord min(|P1 - P2|, |P1 + P2|)).


dq_algebra.py
-------------

Quaternion and dual quaternion algebra and screw parameters.

screw_extraction.py / segmentation.py
-------------------------------------

Hypothesis tests for a single constant screw and the greedy segmentation
of general motions into constant screws.

motion_generation.py
--------------------

Articulated plans and the key segment pipeline for complex tasks.

"""

from . import screw_extraction
__author__ = screw_extraction.__author__
__copyright__ = screw_extraction.__copyright__
__license__ = screw_extraction.__license__
__version__ = screw_extraction.__version__

from .dq_algebra import *
from .screw_extraction import (PoseTrajectory, ScrewFitResult,
                               HypothesisCheck, project_onto_screw,
                               check_if_prismatic,
                               check_if_general_screw, check_if_screw,
                               get_screw_parameters, classify_joint)
from .segmentation import (ScrewSegment, Segmentation, get_screw_segments,
                           get_screw_segments_naive, reconstruct)
from .motion_generation import (RegionOfInterest, TaskObject, TaskScene,
                                StepBounds, articulated_plan,
                                extract_key_segments, reanchor,
                                build_guiding_poses, plan_from_guiding_poses,
                                plan_task)
from .synth_oracle import SynthLeg, SynthSpec, gen_trajectory
from . import catalog
from . import screwIO
