""" Quaternion and unit dual quaternion algebra for rigid displacements.

Quaternions are numpy arrays ordered [w, x, y, z]. Every array helper in
this module broadcasts over leading axes, so an (N, 4) stack of
quaternions is multiplied, conjugated or normed in one call.

A unit dual quaternion D = P + eps Q encodes a pose with orientation P and
position p through Q = 0.5 * (0, p) * P. The screw coordinates of D are the
pair (a, b) = (theta * omega, theta * (m + h * omega)), from which the
power D^tau, ScLERP and the screw parameters (omega, m, h, theta) all
follow.
"""

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

import warnings
from collections import namedtuple

import numpy as np
from scipy.spatial.transform import Rotation as _Rotation


# rotation angle below which a displacement has no defined rotation axis
THETA_MIN = 1.e-6

# translation below which a rotation-free displacement is no motion at all
D_MIN = 1.e-6

# quaternions closer than this to unit norm are accepted silently
UNIT_TOL = 1.e-9

# quaternions within this of unit norm are renormalized with a warning
RENORM_TOL = 1.e-6

# largest entry of R^T R - I accepted for a rotation matrix
ORTHO_TOL = 1.e-6

# below this angle the series expansions replace the closed forms
_SERIES_THETA = 1.e-2


class NoMotionError(ValueError):
    """Raised when a displacement is too small to define a screw axis."""
    pass


##############################################
###         Quaternion array helpers       ###
##############################################

def quat_mul(p, q):
    """Hamilton product p * q of quaternion arrays with shape (..., 4)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p0, p1, p2, p3 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    q0, q1, q2, q3 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([p0*q0 - p1*q1 - p2*q2 - p3*q3,
                     p0*q1 + p1*q0 + p2*q3 - p3*q2,
                     p0*q2 - p1*q3 + p2*q0 + p3*q1,
                     p0*q3 + p1*q2 - p2*q1 + p3*q0], axis=-1)


def quat_conj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1., -1., -1., -1.])


def quat_norm(q):
    q = np.asarray(q, dtype=float)
    return np.sqrt(q[..., 0]**2 + q[..., 1]**2 + q[..., 2]**2 + q[..., 3]**2)


def _vec_norm(v):
    return np.sqrt(v[..., 0]**2 + v[..., 1]**2 + v[..., 2]**2)


def _vec_dot(u, v):
    return u[..., 0]*v[..., 0] + u[..., 1]*v[..., 1] + u[..., 2]*v[..., 2]


def _quat_dot(p, q):
    return p[..., 0]*q[..., 0] + p[..., 1]*q[..., 1] \
        + p[..., 2]*q[..., 2] + p[..., 3]*q[..., 3]


def _pure(v):
    """ Embed 3-vectors as pure quaternions (0, v) """
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.:
        raise ValueError("Rotation axis must be non-zero")
    return np.concatenate([[np.cos(0.5*angle)],
                           np.sin(0.5*angle) * axis / n])


def _rows(x, width):
    """ View x as a 2d stack of rows plus the leading shape to restore """
    x = np.asarray(x, dtype=float)
    return x.reshape(-1, width), x.shape[:-1]


def quat_from_rotvec(rotvec):
    """ Unit quaternion of the rotation vector(s) rotvec, shape (..., 3) """
    rotvec, lead = _rows(rotvec, 3)
    angle = _vec_norm(rotvec)
    # sin(angle/2)/angle written through sinc so that angle=0 is regular
    s = 0.5 * np.sinc(angle / (2.*np.pi))
    q = np.concatenate([np.cos(0.5*angle)[:, None], s[:, None] * rotvec],
                       axis=1)
    return q.reshape(lead + (4,))


def quat_to_matrix(q):
    q = np.asarray(q, dtype=float)
    return _Rotation.from_quat(q[..., [1, 2, 3, 0]]).as_matrix()


def quat_from_matrix(R):
    xyzw = _Rotation.from_matrix(np.asarray(R, dtype=float)).as_quat()
    return xyzw[..., [3, 0, 1, 2]]


def _check_unit(q, what="quaternion"):
    """ Return q as a unit quaternion, renormalizing small deviations.

    Deviations below UNIT_TOL pass silently, deviations below RENORM_TOL are
    renormalized with a warning and anything larger raises ValueError.
    """
    q = np.array(q, dtype=float)
    if q.shape != (4,):
        raise ValueError("A %s needs 4 components, got shape %s"
                         % (what, q.shape))
    if not np.all(np.isfinite(q)):
        raise ValueError("The %s %s is not finite" % (what, q))
    n = quat_norm(q)
    err = abs(n - 1.)
    if err > RENORM_TOL:
        raise ValueError("The %s %s has norm %.12g, expected 1"
                         % (what, q, n))
    if err > UNIT_TOL:
        warnings.warn("Renormalizing %s with norm %.12g" % (what, n))
        q = q / n
    return q


##############################################
###         Screw coordinate kernels       ###
##############################################

def _screw_exp(a, b):
    """ Unit dual quaternion(s) exp of the screw coordinates (a, b).

    a = theta*omega and b = theta*(m + h*omega); both have shape (..., 3).
    Returns the (real, dual) quaternion arrays. Regular at a = 0, where the
    result is the pure translation by b.
    """
    a, lead = _rows(a, 3)
    b, _ = _rows(b, 3)
    theta = _vec_norm(a)
    half = 0.5 * theta
    s = 0.5 * np.sinc(theta / (2.*np.pi))  # sin(theta/2)/theta
    small = theta < _SERIES_THETA
    th2 = theta**2
    c2 = np.where(small, -1./24. + th2/960.,
                  (0.5*np.cos(half) - s) / np.where(small, 1., th2))
    ab = _vec_dot(a, b)
    real = np.concatenate([np.cos(half)[:, None], s[:, None]*a], axis=1)
    dual = np.concatenate([(-0.5*ab*s)[:, None],
                           s[:, None]*b + (ab*c2)[:, None]*a], axis=1)
    return real.reshape(lead + (4,)), dual.reshape(lead + (4,))


def _screw_log(real, dual):
    """ Screw coordinates (a, b) of unit dual quaternion arrays.

    The representative with non-negative scalar part is used, so the
    rotation angle |a| lies in [0, pi].
    """
    real, lead = _rows(real, 4)
    dual, _ = _rows(dual, 4)
    sign = np.where(real[:, 0] < 0., -1., 1.)[:, None]
    real = sign * real
    dual = sign * dual
    vr = real[:, 1:]
    theta = 2. * np.arctan2(_vec_norm(vr), real[:, 0])
    a = (2. / np.sinc(theta / (2.*np.pi)))[:, None] * vr
    p = _position(real, dual)
    half = 0.5 * theta
    small = theta < _SERIES_THETA
    th2 = theta**2
    g = np.where(small, 1. - th2/12. - th2**2/720.,
                 half * np.cos(half) / np.where(small, 1., np.sin(half)))
    k = np.where(small, 1./12. + th2/720.,
                 (1. - g) / np.where(small, 1., th2))
    b = 0.5*np.cross(p, a) + g[:, None]*p + (k*_vec_dot(p, a))[:, None]*a
    return a.reshape(lead + (3,)), b.reshape(lead + (3,))


def _position(real, dual):
    return 2. * quat_mul(dual, quat_conj(real))[..., 1:]


def _dual_from_pose(rotation, position):
    return 0.5 * quat_mul(_pure(position), rotation)


def _dq_mul_arrays(r1, d1, r2, d2):
    return quat_mul(r1, r2), quat_mul(r1, d2) + quat_mul(d1, r2)


def _relative(real, dual, anchor_real, anchor_dual):
    """ D_k * D_a^* for a stack of poses (real, dual) and one anchor """
    ar = quat_conj(anchor_real)
    ad = quat_conj(anchor_dual)
    return quat_mul(real, ar), quat_mul(real, ad) + quat_mul(dual, ar)


def _chord(p, q):
    """ min(|p - q|, |p + q|) over the last axis """
    return np.minimum(quat_norm(p - q), quat_norm(p + q))


##############################################
###             Value types                ###
##############################################

class DualQuaternion(object):
    """ Immutable unit dual quaternion D = real + eps * dual.

    Construct from a pose with DualQuaternion.from_pose, which remembers the
    position it was built from so that encoding the pose again gives the
    exact same floats.
    """

    __slots__ = ('real', 'dual', '_position')

    def __init__(self, real, dual, position=None):
        real = np.array(real, dtype=float)
        dual = np.array(dual, dtype=float)
        if real.shape != (4,) or dual.shape != (4,):
            raise ValueError("Dual quaternion parts must have 4 components")
        real.setflags(write=False)
        dual.setflags(write=False)
        self.real = real
        self.dual = dual
        if position is not None:
            position = np.array(position, dtype=float)
            position.setflags(write=False)
        self._position = position

    @classmethod
    def identity(cls):
        return cls([1., 0., 0., 0.], [0., 0., 0., 0.], position=np.zeros(3))

    @classmethod
    def from_pose(cls, rotation, position):
        """ Pose with unit quaternion rotation [w,x,y,z] and position [m] """
        rotation = _check_unit(rotation, "orientation")
        position = np.array(position, dtype=float)
        if position.shape != (3,) or not np.all(np.isfinite(position)):
            raise ValueError("Position must be 3 finite numbers, got %s"
                             % (position,))
        return cls(rotation, _dual_from_pose(rotation, position), position)

    @classmethod
    def from_translation(cls, t):
        return cls.from_pose([1., 0., 0., 0.], t)

    @classmethod
    def from_rotation(cls, q):
        return cls.from_pose(q, np.zeros(3))

    @classmethod
    def from_arrays(cls, real, dual):
        return cls(real, dual)

    @property
    def position(self):
        if self._position is not None:
            return self._position
        return _position(self.real, self.dual)

    @property
    def rotation(self):
        return self.real

    def as_array(self):
        return np.concatenate([self.real, self.dual])

    def conjugate(self):
        """ D^* = P^* + eps Q^*, the inverse of a unit dual quaternion """
        return DualQuaternion(quat_conj(self.real), quat_conj(self.dual))

    inverse = conjugate

    def dagger(self):
        """ D^dagger = P^* - eps Q^*, used to act on points """
        return DualQuaternion(quat_conj(self.real), -quat_conj(self.dual))

    def transform_point(self, v):
        """ R v + p, computed as D * (1 + eps v) * D^dagger """
        point = DualQuaternion([1., 0., 0., 0.], _pure(v))
        return (self * point * self.dagger()).dual[1:]

    def norm_error(self):
        """ Deviation from the unit conditions |P| = 1 and P.Q = 0 """
        return max(abs(quat_norm(self.real) - 1.),
                   abs(_quat_dot(self.real, self.dual)))

    def is_unit(self, tol=UNIT_TOL):
        return self.norm_error() <= tol

    def __mul__(self, other):
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return dq_mul(self, other)

    def __neg__(self):
        return DualQuaternion(-self.real, -self.dual, self._position)

    def __repr__(self):
        return "DualQuaternion(real=%s, dual=%s)" % (
            np.array2string(self.real, precision=6),
            np.array2string(self.dual, precision=6))


Pose = namedtuple('Pose', ['rotation', 'position'])


class ScrewParams(namedtuple('ScrewParams',
                             ['axis', 'moment', 'pitch', 'magnitude'])):
    """ Screw axis (axis, moment), pitch h and magnitude.

    The magnitude is the rotation angle theta [rad] for a finite pitch and
    the translation length [m] for an infinite pitch (pure translation),
    in which case the moment is zero. The axis carries the direction of
    motion, so the magnitude is usually non-negative.
    """

    __slots__ = ()

    def __new__(cls, axis, moment, pitch, magnitude):
        axis = np.array(axis, dtype=float)
        moment = np.array(moment, dtype=float)
        if axis.shape != (3,) or moment.shape != (3,):
            raise ValueError("Screw axis and moment need 3 components")
        n = np.linalg.norm(axis)
        if abs(n - 1.) > RENORM_TOL:
            raise ValueError("Screw axis %s is not a unit vector (norm %.12g)"
                             % (axis, n))
        if abs(n - 1.) > UNIT_TOL:
            axis = axis / n
        pitch = float(pitch)
        if np.isnan(pitch):
            raise ValueError("Screw pitch must not be NaN")
        if np.isinf(pitch):
            pitch = np.inf
            moment = np.zeros(3)
        elif abs(np.dot(axis, moment)) > RENORM_TOL * max(1., np.linalg.norm(moment)):
            raise ValueError("Screw moment %s is not orthogonal to axis %s"
                             % (moment, axis))
        axis.setflags(write=False)
        moment.setflags(write=False)
        return super(ScrewParams, cls).__new__(cls, axis, moment, pitch,
                                               float(magnitude))

    def __eq__(self, other):
        if not isinstance(other, ScrewParams):
            return NotImplemented
        return (np.array_equal(self.axis, other.axis)
                and np.array_equal(self.moment, other.moment)
                and self.pitch == other.pitch
                and self.magnitude == other.magnitude)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    @classmethod
    def translation(cls, direction, distance):
        return cls(direction, np.zeros(3), np.inf, distance)

    @classmethod
    def from_point(cls, axis, point, pitch, magnitude):
        """ Screw through point with direction axis; moment = point x axis """
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        return cls(axis, np.cross(point, axis), pitch, magnitude)

    @property
    def is_translation(self):
        return np.isinf(self.pitch)

    @property
    def translation_along_axis(self):
        """ d = h * theta, or the magnitude for a pure translation """
        if self.is_translation:
            return self.magnitude
        return self.pitch * self.magnitude

    @property
    def point(self):
        """ Point of the axis closest to the origin, axis x moment """
        return np.cross(self.axis, self.moment)

    def with_magnitude(self, magnitude):
        return self._replace(magnitude=float(magnitude))

    def screw_coordinates(self, magnitude=None):
        """ (a, b) for the displacement of the given magnitude """
        mag = self.magnitude if magnitude is None else magnitude
        if self.is_translation:
            return np.zeros(3), mag * self.axis
        return mag * self.axis, mag * (self.moment + self.pitch * self.axis)


class Tolerance(namedtuple('Tolerance', ['eps_p', 'eps_phi'])):
    """ (eps_p [m], eps_phi [quaternion chord]) neighbourhood size """

    __slots__ = ()

    def __new__(cls, eps_p, eps_phi):
        eps_p = float(eps_p)
        eps_phi = float(eps_phi)
        if not (eps_p > 0. and eps_phi > 0.):
            raise ValueError("Tolerances must be positive, got (%s, %s)"
                             % (eps_p, eps_phi))
        if eps_phi > np.sqrt(2.):
            raise ValueError("The maximum allowed eps_phi is sqrt(2), got %s"
                             % eps_phi)
        return super(Tolerance, cls).__new__(cls, eps_p, eps_phi)


class SerialChain(namedtuple('SerialChain', ['joints', 'home'])):
    """ Joint screws (space frame, ScrewParams) and the home pose """

    __slots__ = ()

    def __new__(cls, joints, home):
        return super(SerialChain, cls).__new__(cls, tuple(joints), home)


##############################################
###              Operations                ###
##############################################

def dq_mul(D1, D2):
    """ (P1 P2) + eps (P1 Q2 + Q1 P2) """
    real, dual = _dq_mul_arrays(D1.real, D1.dual, D2.real, D2.dual)
    return DualQuaternion(real, dual)


def pose_to_dq(pose):
    return DualQuaternion.from_pose(pose.rotation, pose.position)


def dq_to_pose(D):
    return Pose(np.array(D.real), np.array(D.position))


def dq_from_matrix(T):
    """ Unit dual quaternion of a 4x4 homogeneous matrix (or 16 row-major
    numbers). The rotation block must be orthonormal within ORTHO_TOL. """
    T = np.asarray(T, dtype=float)
    if T.size != 16:
        raise ValueError("A homogeneous matrix needs 16 entries, got %d"
                         % T.size)
    T = T.reshape(4, 4)
    if not np.all(np.isfinite(T)):
        raise ValueError("Homogeneous matrix has non-finite entries")
    if np.max(np.abs(T[3] - [0., 0., 0., 1.])) > ORTHO_TOL:
        raise ValueError("Last row of a homogeneous matrix must be "
                         "[0, 0, 0, 1], got %s" % (T[3],))
    R = T[:3, :3]
    err = np.max(np.abs(R.T.dot(R) - np.eye(3)))
    if err >= ORTHO_TOL or np.linalg.det(R) <= 0.:
        raise ValueError("Rotation block is not a proper orthonormal matrix "
                         "(|R^T R - I| = %.3g)" % err)
    q = quat_from_matrix(R)
    q = q / quat_norm(q)
    return DualQuaternion.from_pose(q, T[:3, 3])


def dq_to_matrix(D):
    T = np.eye(4)
    T[:3, :3] = quat_to_matrix(D.real)
    T[:3, 3] = D.position
    return T


def dq_log(D):
    return _screw_log(D.real, D.dual)


def dq_exp(a, b):
    real, dual = _screw_exp(a, b)
    return DualQuaternion(real, dual)


def dq_power(D, tau):
    """ D^tau along the constant screw of D (shortest representative) """
    a, b = dq_log(D)
    return dq_exp(tau * a, tau * b)


def _aligned(D1, D2):
    """ D2, sign-flipped onto the hemisphere of D1 """
    if _quat_dot(D1.real, D2.real) < 0.:
        return -D2
    return D2


def sclerp_extrapolate(D1, D2, tau):
    """ D1 (D1^* D2)^tau for any real tau """
    D2 = _aligned(D1, D2)
    return D1 * dq_power(D1.conjugate() * D2, tau)


def sclerp(D1, D2, tau):
    """ Screw linear interpolation between D1 (tau=0) and D2 (tau=1) """
    if not 0. <= tau <= 1.:
        raise ValueError("ScLERP parameter must lie in [0, 1], got %s. Use "
                         "sclerp_extrapolate to leave the segment." % (tau,))
    return sclerp_extrapolate(D1, D2, tau)


def sclerp_many(D1, D2, taus):
    """ ScLERP evaluated at an array of parameters; returns (real, dual) """
    taus = np.asarray(taus, dtype=float)
    D2 = _aligned(D1, D2)
    rel = D1.conjugate() * D2
    a, b = dq_log(rel)
    r, d = _screw_exp(taus[:, None]*a, taus[:, None]*b)
    return _dq_mul_arrays(D1.real, D1.dual, r, d)


def screw_params_from_dq(D):
    """ Screw parameters of the displacement D.

    theta is returned in [0, pi] with the axis carrying the direction. A
    rotation below THETA_MIN is a pure translation; when the translation is
    also below D_MIN, NoMotionError is raised.
    """
    real = np.asarray(D.real)
    dual = np.asarray(D.dual)
    if real[0] < 0.:
        real, dual = -real, -dual
    vr = real[1:]
    theta = 2. * np.arctan2(np.linalg.norm(vr), real[0])
    p = _position(real, dual)
    if theta < THETA_MIN:
        dist = np.linalg.norm(p)
        if dist < D_MIN:
            raise NoMotionError("Displacement has rotation %.3g rad and "
                                "translation %.3g m; no screw axis is defined"
                                % (theta, dist))
        return ScrewParams.translation(p / dist, dist)
    omega = vr / np.linalg.norm(vr)
    d = np.dot(p, omega)
    m = 0.5 * (np.cross(p, omega) + (p - d*omega) / np.tan(0.5*theta))
    # remove round-off so that omega . m = 0 holds to machine precision
    m = m - np.dot(m, omega) * omega
    return ScrewParams(omega, m, d / theta, theta)


def screw_displacement(params, magnitude=None):
    """ Displacement along the screw params; magnitude defaults to the
    params' own. """
    a, b = params.screw_coordinates(magnitude)
    return dq_exp(a, b)


def dq_from_screw(params):
    return screw_displacement(params)


def dist_p(D1, D2):
    return float(np.linalg.norm(D1.position - D2.position))


def dist_phi(D1, D2):
    return float(_chord(D1.real, D2.real))


def in_neighbourhood(D, Dp, tol):
    return dist_p(D, Dp) <= tol.eps_p and dist_phi(D, Dp) <= tol.eps_phi


def dq_isclose(D1, D2, atol=1.e-9):
    """ Pose equality within atol in position and orientation chord """
    return dist_p(D1, D2) <= atol and dist_phi(D1, D2) <= atol


def screw_params_isclose(s1, s2, atol=1.e-9):
    if s1.is_translation != s2.is_translation:
        return False
    close = np.allclose(s1.axis, s2.axis, rtol=0, atol=atol) \
        and np.allclose(s1.moment, s2.moment, rtol=0, atol=atol) \
        and abs(s1.magnitude - s2.magnitude) <= atol
    if not s1.is_translation:
        close = close and abs(s1.pitch - s2.pitch) <= atol
    return close


def fk_poe(chain, joint_values):
    """ Product-of-exponentials forward kinematics.

    Input
    =====
    chain        --- SerialChain of space-frame joint screws and home pose
    joint_values --- one value per joint, radians for finite pitch joints and
                     meters for prismatic joints

    Output
    ======
    DualQuaternion e^{xi_1 q_1} ... e^{xi_n q_n} M
    """
    joint_values = np.atleast_1d(np.asarray(joint_values, dtype=float))
    if len(joint_values) != len(chain.joints):
        raise ValueError("Chain has %d joints, got %d joint values"
                         % (len(chain.joints), len(joint_values)))
    T = DualQuaternion.identity()
    for joint, q in zip(chain.joints, joint_values):
        T = T * screw_displacement(joint, q)
    return T * chain.home
