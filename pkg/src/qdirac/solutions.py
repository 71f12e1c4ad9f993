"""Construction of free-particle solutions of the quaternionic Dirac
equation in the real-Hilbert-space formulation.

A solution is the quaternionic field

    Psi(x) = cos(Theta) exp(i k0.x) u0  +  sin(Theta) exp(i k1.x) u1 j,

with Theta = theta.x + theta0.  Splitting the equation symplectically
decouples it into two complex Dirac problems whose mass terms carry
opposite signs:

    (slashed(k0) + m) u0 = 0        (complex half)
    (slashed(k1) - m) u1 = 0        (j half)

Sign bookkeeping that follows from this and is certified at build time:
the (+/-) branch labels attached to a solution name the spinor shape
(upper-dominant "+" versus lower-dominant "-").  For the j half the
label coincides with the sign of the plane-wave frequency k1.t.  For the
complex half the flipped mass sign forces the opposite frequency,
k0.t = -esign0 * E0: the upper-dominant kernel element of
slashed(k) + m lives at negative k.t.  Only this assignment satisfies
the field equation and reproduces the +-cos(2*theta0) adjoint-norm
pattern simultaneously; every constructor re-checks its residual and
aborts rather than fall back to a different sign convention.

Spinor phases are fixed by making the first significant component real
positive, so constructions are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import SampledField, SpacetimeGrid
from .spinor import (
    FourVector,
    PAULI,
    QSpinor4,
    ZERO_FOUR,
    slashed,
    spin_basis,
)

SCHEMA_VERSION = 1

SPINS = ("up", "down")
CHIRALITIES = ("L", "R")
NORM_CHOICES = ("E", "E_over_m")

# Deterministic sample points used by build-time residual certification.
_CERT_SEED = 8643
_CERT_POINTS = 32


class CertificationError(RuntimeError):
    """A constructed solution failed its residual certification.

    This signals an internal sign or convention bug, never bad user
    input, and deliberately aborts instead of trying another convention.
    """


def _as_triple(v, name: str) -> tuple[float, float, float]:
    vals = tuple(float(c) for c in v)
    if len(vals) != 3:
        raise ValueError(f"{name} must be a 3-vector, got length {len(vals)}")
    if not all(math.isfinite(c) for c in vals):
        raise ValueError(f"{name} must have finite components, got {vals}")
    return vals


def mass_shell_energy(kvec, mass: float, sign: int = 1) -> float:
    """Frequency sign * sqrt(|kvec|^2 + mass^2) on the mass shell."""
    kvec = np.asarray(kvec, dtype=float)
    if mass < 0:
        raise ValueError("mass must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k2 = float(kvec @ kvec)
    if mass == 0.0 and k2 == 0.0:
        raise ValueError("massless momentum must have nonzero spatial part")
    return sign * math.sqrt(k2 + mass * mass)


def dispersion_residual(kfour: FourVector, mass: float) -> float:
    """|k.k - m^2| relative to |k.t|^2 + m^2."""
    scale = kfour.t * kfour.t + mass * mass
    if scale == 0.0:
        return abs(kfour.dot(kfour))
    return abs(kfour.dot(kfour) - mass * mass) / scale


def _fix_phase(u: np.ndarray) -> np.ndarray:
    """Rotate a spinor's global phase so the first significant component
    is real positive."""
    nrm = float(np.linalg.norm(u))
    if nrm == 0.0:
        raise ValueError("cannot fix the phase of a zero spinor")
    for comp in u:
        if abs(comp) > 1e-12 * nrm:
            return u * (comp.conjugate() / abs(comp))
    raise ValueError("spinor has no significant component")


def build_u_spinor(
    kfour: FourVector,
    mass: float,
    mass_sign: int,
    spin: str = "up",
    norm_choice: str = "E_over_m",
    spin_axis=None,
    tol: float = 1e-12,
) -> np.ndarray:
    """Closed-form element of ker(slashed(k) - mass_sign*m) for on-shell k.

    The 2-spinor chi is the spin-`spin` eigenvector of sigma.n for the
    quantization axis `spin_axis` (z axis when None).  Both branch shapes
    use the denominator |k.t| + m, so they are stable at every admissible
    frequency sign.  The result is scaled to u^dag u = |k.t| ("E") or
    |k.t|/m ("E_over_m") and its kernel membership is re-verified.
    """
    if mass <= 0.0:
        raise ValueError("build_u_spinor requires mass > 0")
    if mass_sign not in (1, -1):
        raise ValueError("mass_sign must be +1 or -1")
    if spin not in SPINS:
        raise ValueError(f"spin must be one of {SPINS}, got {spin!r}")
    if norm_choice not in NORM_CHOICES:
        raise ValueError(f"norm_choice must be one of {NORM_CHOICES}, got {norm_choice!r}")
    shell = abs(kfour.dot(kfour) - mass * mass)
    if shell > tol * (kfour.t * kfour.t + mass * mass):
        raise ValueError(f"four-momentum {kfour} is off the mass shell for m={mass}")

    chi_up, chi_down = spin_basis(spin_axis)
    chi = chi_up if spin == "up" else chi_down
    energy = abs(kfour.t)
    kvec = kfour.spatial()
    sk = sum(kvec[ell] * PAULI[ell] for ell in range(3))
    lower = (sk @ chi) / (energy + mass)

    positive = kfour.t > 0
    if mass_sign > 0:
        blocks = (chi, lower) if positive else (-lower, chi)
    else:
        blocks = (lower, chi) if positive else (chi, -lower)
    u = np.concatenate(blocks).astype(complex)

    target = energy if norm_choice == "E" else energy / mass
    u = u * math.sqrt(target / float(np.real(np.vdot(u, u))))
    u = _fix_phase(u)

    resid = float(np.linalg.norm((slashed(kfour) - mass_sign * mass * np.eye(4)) @ u))
    if resid > tol * (energy + mass) * float(np.linalg.norm(u)):
        raise CertificationError(
            f"u-spinor failed the kernel condition: residual {resid:.3e} "
            f"for k={kfour}, mass_sign={mass_sign}"
        )
    return u


def _massless_kernel_spinor(kfour: FourVector, chirality: str) -> np.ndarray:
    """Element of the 2-dimensional ker(slashed(k)) for null k != 0,
    selected by chirality ("R" -> +1, "L" -> -1 eigenvalue of gamma5).

    The helicity of the returned spinor is chirality * sign(k.t) / 2 * 2;
    concretely u = (chi_h, c*chi_h) with h = c * sign(k.t).
    """
    if chirality not in CHIRALITIES:
        raise ValueError(f"chirality must be one of {CHIRALITIES}, got {chirality!r}")
    kvec = kfour.spatial()
    if float(np.linalg.norm(kvec)) == 0.0 or kfour.t == 0.0:
        raise ValueError("massless kernel needs a nonzero null four-momentum")
    c = 1 if chirality == "R" else -1
    eps = 1 if kfour.t > 0 else -1
    h = c * eps
    chi_up, chi_down = spin_basis(kvec)
    chi = chi_up if h > 0 else chi_down
    return np.concatenate((chi, c * chi)).astype(complex)


# ---------------------------------------------------------------------------
# solution descriptors


@dataclass(frozen=True, slots=True)
class PlaneWaveSolution:
    """Closed-form solution descriptor, evaluable at any spacetime point.

    evaluate(x) = cos(Theta) exp(i k0.x) u0 + sin(Theta) exp(i k1.x) u1 j
    with Theta = theta.x + theta0.  Instances built by the constructors
    in this module are residual-certified; the raw dataclass performs no
    physics checks so tests can form deliberately broken descriptors.
    """

    theta0: float
    k0: FourVector
    k1: FourVector
    u0: np.ndarray
    u1: np.ndarray
    mass: float
    theta: FourVector = ZERO_FOUR
    label: str = ""

    def __post_init__(self) -> None:
        for name in ("u0", "u1"):
            a = np.array(getattr(self, name), dtype=complex, order="C")
            if a.shape != (4,):
                raise ValueError(f"{name} must have shape (4,), got {a.shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        object.__setattr__(self, "theta0", float(self.theta0))
        object.__setattr__(self, "mass", float(self.mass))
        if self.mass < 0 or not math.isfinite(self.mass):
            raise ValueError("mass must be finite and >= 0")

    # -- evaluation ---------------------------------------------------

    def eval_with_derivatives(self, points):
        """Values and analytic first derivatives at a batch of points.

        Returns (psi0, psi1, d0, d1): values with shape (P, 4) and
        derivatives with shape (P, 4, 4) indexed (point, lowered mu,
        spinor component).
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 4)
        k0l = self.k0.lowered()
        k1l = self.k1.lowered()
        thl = self.theta.lowered()
        phase0 = np.exp(1j * (pts @ k0l))
        phase1 = np.exp(1j * (pts @ k1l))
        ang = pts @ thl + self.theta0
        c = np.cos(ang)
        s = np.sin(ang)
        psi0 = (c * phase0)[:, None] * self.u0
        psi1 = (s * phase1)[:, None] * self.u1
        coef0 = (-s[:, None] * thl + 1j * c[:, None] * k0l) * phase0[:, None]
        coef1 = (c[:, None] * thl + 1j * s[:, None] * k1l) * phase1[:, None]
        d0 = coef0[:, :, None] * self.u0[None, None, :]
        d1 = coef1[:, :, None] * self.u1[None, None, :]
        return psi0, psi1, d0, d1

    def evaluate(self, x: FourVector) -> QSpinor4:
        psi0, psi1, _, _ = self.eval_with_derivatives(x.as_array())
        return QSpinor4(psi0[0], psi1[0])

    def evaluate_grid(self, grid: SpacetimeGrid) -> SampledField:
        ts, xs, ys, zs = grid.axes()
        coords = (
            ts[:, None, None, None],
            xs[None, :, None, None],
            ys[None, None, :, None],
            zs[None, None, None, :],
        )

        def arg(lowered):
            return sum(lowered[i] * coords[i] for i in range(4))

        ang = arg(self.theta.lowered()) + self.theta0
        base0 = np.cos(ang) * np.exp(1j * arg(self.k0.lowered()))
        base1 = np.sin(ang) * np.exp(1j * arg(self.k1.lowered()))
        shape = grid.counts
        psi0 = np.broadcast_to(base0, shape)[..., None] * self.u0
        psi1 = np.broadcast_to(base1, shape)[..., None] * self.u1
        return SampledField(grid, psi0, psi1)

    def density(self, x: FourVector) -> float:
        s = self.evaluate(x)
        return float(np.sum(np.abs(s.psi0) ** 2 + np.abs(s.psi1) ** 2))


# ---------------------------------------------------------------------------
# massive family


@dataclass(frozen=True, slots=True)
class MassiveSpec:
    """Parameters of one massive plane-wave solution.

    esign0/esign1 are the branch labels of the (+-)/(-+) pairing; they
    must be opposite.  esign1 equals the frequency sign of k1; the
    complex half runs at the reversed frequency -esign0*E0 (see module
    docstring).
    """

    mass: float
    theta0: float
    kvec0: tuple[float, float, float]
    kvec1: tuple[float, float, float]
    spin0: str = "up"
    spin1: str = "up"
    esign0: int = 1
    esign1: int = -1
    norm_choice: str = "E_over_m"

    def __post_init__(self) -> None:
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "theta0", float(self.theta0))
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError("mass must be finite and > 0")
        if not math.isfinite(self.theta0):
            raise ValueError("theta0 must be finite")
        object.__setattr__(self, "kvec0", _as_triple(self.kvec0, "kvec0"))
        object.__setattr__(self, "kvec1", _as_triple(self.kvec1, "kvec1"))
        for name in ("spin0", "spin1"):
            if getattr(self, name) not in SPINS:
                raise ValueError(f"{name} must be one of {SPINS}")
        if self.esign0 not in (1, -1) or self.esign1 not in (1, -1):
            raise ValueError("esign0/esign1 must be +1 or -1")
        if self.esign1 != -self.esign0:
            raise ValueError("esign1 must be opposite to esign0 (the (+-)/(-+) pairing)")
        if self.norm_choice not in NORM_CHOICES:
            raise ValueError(f"norm_choice must be one of {NORM_CHOICES}")

    @property
    def label(self) -> str:
        s = {"up": "u", "down": "d"}
        e = {1: "+", -1: "-"}
        return f"{s[self.spin0]}{s[self.spin1]}{e[self.esign0]}{e[self.esign1]}"


def _resolve_axis(spin_axis, kvec):
    if spin_axis is None:
        return None
    if isinstance(spin_axis, str):
        if spin_axis != "momentum":
            raise ValueError("spin_axis must be None, 'momentum', or a 3-vector")
        if float(np.linalg.norm(kvec)) == 0.0:
            raise ValueError("spin_axis='momentum' needs nonzero spatial momentum")
        return kvec
    return _as_triple(spin_axis, "spin_axis")


def build_massive_solution(spec: MassiveSpec, spin_axis=None) -> PlaneWaveSolution:
    """Certified massive plane-wave solution for one label combination."""
    e0 = mass_shell_energy(spec.kvec0, spec.mass)
    e1 = mass_shell_energy(spec.kvec1, spec.mass)
    # flipped mass sign on the complex half reverses its frequency
    k0 = FourVector(-spec.esign0 * e0, *spec.kvec0)
    k1 = FourVector(spec.esign1 * e1, *spec.kvec1)
    u0 = build_u_spinor(
        k0, spec.mass, mass_sign=-1, spin=spec.spin0,
        norm_choice=spec.norm_choice, spin_axis=_resolve_axis(spin_axis, spec.kvec0),
    )
    u1 = build_u_spinor(
        k1, spec.mass, mass_sign=+1, spin=spec.spin1,
        norm_choice=spec.norm_choice, spin_axis=_resolve_axis(spin_axis, spec.kvec1),
    )
    sol = PlaneWaveSolution(
        theta0=spec.theta0, k0=k0, k1=k1, u0=u0, u1=u1,
        mass=spec.mass, theta=ZERO_FOUR, label=spec.label,
    )
    certify_solution(sol)
    return sol


SPIN_PAIRS = (("up", "up"), ("down", "down"), ("up", "down"), ("down", "up"))


def enumerate_massive_set(
    mass: float,
    kvec0,
    kvec1,
    theta0: float,
    norm_choice: str = "E_over_m",
    spin_axis=None,
) -> list[PlaneWaveSolution]:
    """The eight labeled massive solutions, in the fixed order
    (uu,+-), (uu,-+), (dd,+-), (dd,-+), (ud,+-), (ud,-+), (du,+-), (du,-+)."""
    out = []
    for spin0, spin1 in SPIN_PAIRS:
        for esign0 in (1, -1):
            spec = MassiveSpec(
                mass=mass, theta0=theta0, kvec0=kvec0, kvec1=kvec1,
                spin0=spin0, spin1=spin1, esign0=esign0, esign1=-esign0,
                norm_choice=norm_choice,
            )
            out.append(build_massive_solution(spec, spin_axis=spin_axis))
    return out


# ---------------------------------------------------------------------------
# massless families


@dataclass(frozen=True, slots=True)
class MasslessThetaSpec:
    """Massless solution with a running phase Theta = theta.x + theta0.

    theta must be null and nonzero; the component momenta are
    k_alpha = kappa_alpha * theta with nonzero real kappas, and each
    component spinor is the chirality-selected kernel element of
    slashed(theta).
    """

    theta: FourVector
    kappa0: float
    kappa1: float
    theta0: float = 0.0
    chirality0: str = "R"
    chirality1: str = "R"

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa0", float(self.kappa0))
        object.__setattr__(self, "kappa1", float(self.kappa1))
        object.__setattr__(self, "theta0", float(self.theta0))
        if self.theta.is_zero():
            raise ValueError("theta must be nonzero (use the constant-phase family otherwise)")
        scale = max(self.theta.t**2, float(self.theta.spatial() @ self.theta.spatial()))
        if abs(self.theta.dot(self.theta)) > 1e-12 * scale:
            raise ValueError(f"theta must be null, got theta.theta = {self.theta.dot(self.theta)!r}")
        if self.kappa0 == 0.0 or self.kappa1 == 0.0:
            raise ValueError("kappa0/kappa1 must be nonzero (zero four-momentum is not normalizable)")
        for name in ("chirality0", "chirality1"):
            if getattr(self, name) not in CHIRALITIES:
                raise ValueError(f"{name} must be one of {CHIRALITIES}")

    @property
    def label(self) -> str:
        return f"{self.chirality0}{self.chirality1}.theta"


def build_massless_theta_solution(spec: MasslessThetaSpec) -> PlaneWaveSolution:
    """Certified massless solution with running phase direction theta."""
    k0 = spec.theta.scale(spec.kappa0)
    k1 = spec.theta.scale(spec.kappa1)
    u0 = _fix_phase(_massless_kernel_spinor(spec.theta, spec.chirality0))
    u1 = _fix_phase(_massless_kernel_spinor(spec.theta, spec.chirality1))
    # normalization forced to u^dag u = |k.t| (mass is zero)
    u0 = u0 * math.sqrt(abs(k0.t) / float(np.real(np.vdot(u0, u0))))
    u1 = u1 * math.sqrt(abs(k1.t) / float(np.real(np.vdot(u1, u1))))
    sol = PlaneWaveSolution(
        theta0=spec.theta0, k0=k0, k1=k1, u0=u0, u1=u1,
        mass=0.0, theta=spec.theta, label=spec.label,
    )
    certify_solution(sol)
    return sol


_CHIRALITY_PAIRS = (("L", "L"), ("L", "R"), ("R", "L"), ("R", "R"))


def enumerate_massless_theta0_set(kvec0, kvec1, theta0: float) -> list[PlaneWaveSolution]:
    """The four constant-phase massless solutions, ordered
    (L,L), (L,R), (R,L), (R,R); both components run at positive frequency."""
    kvec0 = _as_triple(kvec0, "kvec0")
    kvec1 = _as_triple(kvec1, "kvec1")
    k0 = FourVector(mass_shell_energy(kvec0, 0.0), *kvec0)
    k1 = FourVector(mass_shell_energy(kvec1, 0.0), *kvec1)
    out = []
    for c0, c1 in _CHIRALITY_PAIRS:
        u0 = _fix_phase(_massless_kernel_spinor(k0, c0))
        u1 = _fix_phase(_massless_kernel_spinor(k1, c1))
        u0 = u0 * math.sqrt(abs(k0.t) / float(np.real(np.vdot(u0, u0))))
        u1 = u1 * math.sqrt(abs(k1.t) / float(np.real(np.vdot(u1, u1))))
        sol = PlaneWaveSolution(
            theta0=float(theta0), k0=k0, k1=k1, u0=u0, u1=u1,
            mass=0.0, theta=ZERO_FOUR, label=f"{c0}{c1}",
        )
        certify_solution(sol)
        out.append(sol)
    return out


# ---------------------------------------------------------------------------
# constraint reporting


@dataclass(frozen=True, slots=True)
class ConstraintCheck:
    name: str
    residual: float
    passed: bool
    vacuous: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "passed": self.passed,
            "vacuous": self.vacuous,
        }


@dataclass(frozen=True, slots=True)
class ConstraintReport:
    checks: tuple[ConstraintCheck, ...]
    kappa0: float
    kappa1: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed or c.vacuous for c in self.checks)

    def check(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "kappa0": self.kappa0,
            "kappa1": self.kappa1,
            "all_passed": self.all_passed,
        }


def check_constraints(
    theta: FourVector,
    k0: FourVector,
    k1: FourVector,
    mass: float,
    tol: float = 1e-12,
) -> ConstraintReport:
    """Report on the running-phase constraint chain: theta null, momenta
    orthogonal and proportional to theta, effective momenta on shell, and
    mass forced to zero.  Reports, never raises; theta = 0 marks every
    check vacuous."""
    checks: list[ConstraintCheck] = []
    if theta.is_zero():
        for name in (
            "theta_null", "k0_dot_theta", "k1_dot_theta",
            "k0_proportional", "k1_proportional",
            "p0_shell", "p1_shell", "massless_required",
        ):
            checks.append(ConstraintCheck(name, 0.0, True, vacuous=True))
        return ConstraintReport(tuple(checks), 0.0, 0.0)

    th_arr = theta.as_array()
    th_scale = float(th_arr @ th_arr)
    checks.append(
        ConstraintCheck("theta_null", abs(theta.dot(theta)),
                        abs(theta.dot(theta)) <= tol * th_scale)
    )

    kappas = []
    for name, k in (("0", k0), ("1", k1)):
        k_arr = k.as_array()
        k_scale = max(float(np.abs(k_arr).max()) * float(np.abs(th_arr).max()), 1e-300)
        r_dot = abs(k.dot(theta))
        checks.append(ConstraintCheck(f"k{name}_dot_theta", r_dot, r_dot <= tol * k_scale))
        kappa = float(k_arr @ th_arr) / th_scale
        kappas.append(kappa)
        r_prop = float(np.linalg.norm(k_arr - kappa * th_arr))
        prop_scale = max(float(np.linalg.norm(k_arr)), math.sqrt(th_scale))
        checks.append(ConstraintCheck(f"k{name}_proportional", r_prop, r_prop <= tol * prop_scale))
        r_shell = max(
            abs((k + theta).dot(k + theta) - mass * mass),
            abs((k - theta).dot(k - theta) - mass * mass),
        )
        shell_scale = max(k.t * k.t + mass * mass, th_scale)
        checks.append(ConstraintCheck(f"p{name}_shell", r_shell, r_shell <= tol * shell_scale))

    checks.append(ConstraintCheck("massless_required", abs(mass), mass == 0.0))

    order = (
        "theta_null", "k0_dot_theta", "k1_dot_theta",
        "k0_proportional", "k1_proportional",
        "p0_shell", "p1_shell", "massless_required",
    )
    by_name = {c.name: c for c in checks}
    return ConstraintReport(tuple(by_name[n] for n in order), kappas[0], kappas[1])


# ---------------------------------------------------------------------------
# wave packets


@dataclass(frozen=True, slots=True)
class PacketSample:
    """One on-shell plane-wave sample of a packet component."""

    kvec: tuple[float, float, float]
    amplitude: float
    spin: str = "up"
    esign: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "kvec", _as_triple(self.kvec, "kvec"))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        if self.spin not in SPINS:
            raise ValueError(f"spin must be one of {SPINS}")
        if self.esign not in (1, -1):
            raise ValueError("esign must be +1 or -1")


@dataclass(frozen=True, slots=True)
class WavePacketSpec:
    """Finite superposition for one symplectic component."""

    component: int
    mass: float
    samples: tuple[PacketSample, ...]

    def __post_init__(self) -> None:
        if self.component not in (0, 1):
            raise ValueError("component must be 0 or 1")
        object.__setattr__(self, "mass", float(self.mass))
        if self.mass < 0 or not math.isfinite(self.mass):
            raise ValueError("mass must be finite and >= 0")
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise ValueError("samples must be nonempty")


@dataclass(frozen=True, slots=True)
class PacketTerm:
    amplitude: float
    k: FourVector
    u: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.u, dtype=complex, order="C")
        a.setflags(write=False)
        object.__setattr__(self, "u", a)
        object.__setattr__(self, "amplitude", float(self.amplitude))


@dataclass(frozen=True, slots=True)
class WavePacket:
    """Grid-evaluable field cos(theta0)*sum_n A_n e^{ik_n.x}u_n
    + sin(theta0)*sum_m B_m e^{iq_m.x}v_m j."""

    mass: float
    theta0: float
    terms0: tuple[PacketTerm, ...]
    terms1: tuple[PacketTerm, ...]

    def eval_with_derivatives(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 4)
        n = pts.shape[0]
        psi = [np.zeros((n, 4), dtype=complex), np.zeros((n, 4), dtype=complex)]
        dpsi = [np.zeros((n, 4, 4), dtype=complex), np.zeros((n, 4, 4), dtype=complex)]
        mix = (math.cos(self.theta0), math.sin(self.theta0))
        for comp, terms in enumerate((self.terms0, self.terms1)):
            for term in terms:
                kl = term.k.lowered()
                phase = np.exp(1j * (pts @ kl)) * (mix[comp] * term.amplitude)
                psi[comp] += phase[:, None] * term.u
                dpsi[comp] += (1j * phase[:, None] * kl)[:, :, None] * term.u[None, None, :]
        return psi[0], psi[1], dpsi[0], dpsi[1]

    def evaluate(self, x: FourVector) -> QSpinor4:
        psi0, psi1, _, _ = self.eval_with_derivatives(x.as_array())
        return QSpinor4(psi0[0], psi1[0])

    def evaluate_grid(self, grid: SpacetimeGrid) -> SampledField:
        ts, xs, ys, zs = grid.axes()
        coords = (
            ts[:, None, None, None],
            xs[None, :, None, None],
            ys[None, None, :, None],
            zs[None, None, None, :],
        )
        shape = grid.counts + (4,)
        psi = [np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex)]
        mix = (math.cos(self.theta0), math.sin(self.theta0))
        for comp, terms in enumerate((self.terms0, self.terms1)):
            for term in terms:
                kl = term.k.lowered()
                arg = sum(kl[i] * coords[i] for i in range(4))
                phase = np.exp(1j * arg) * (mix[comp] * term.amplitude)
                psi[comp] += np.broadcast_to(phase, grid.counts)[..., None] * term.u
        return SampledField(grid, psi[0], psi[1])

    def density(self, x: FourVector) -> float:
        s = self.evaluate(x)
        return float(np.sum(np.abs(s.psi0) ** 2 + np.abs(s.psi1) ** 2))


def _packet_term(sample: PacketSample, mass: float, component: int) -> PacketTerm:
    if mass > 0:
        energy = mass_shell_energy(sample.kvec, mass)
        if component == 0:
            k = FourVector(-sample.esign * energy, *sample.kvec)
            u = build_u_spinor(k, mass, mass_sign=-1, spin=sample.spin)
        else:
            k = FourVector(sample.esign * energy, *sample.kvec)
            u = build_u_spinor(k, mass, mass_sign=+1, spin=sample.spin)
    else:
        energy = mass_shell_energy(sample.kvec, 0.0)
        k = FourVector(sample.esign * energy, *sample.kvec)
        # spin maps to helicity for null momenta; chirality follows as
        # helicity * frequency sign
        h = 1 if sample.spin == "up" else -1
        chirality = "R" if h * sample.esign > 0 else "L"
        u = _fix_phase(_massless_kernel_spinor(k, chirality))
        u = u * math.sqrt(abs(k.t) / float(np.real(np.vdot(u, u))))
    return PacketTerm(sample.amplitude, k, u)


def build_wave_packet(spec: WavePacketSpec) -> WavePacket:
    """Single-component packet; the other symplectic half is zero."""
    terms = tuple(_packet_term(s, spec.mass, spec.component) for s in spec.samples)
    if spec.component == 0:
        return WavePacket(spec.mass, 0.0, terms, ())
    return WavePacket(spec.mass, math.pi / 2.0, (), terms)


def make_wave_packet(mass: float, theta0: float, samples0, samples1) -> WavePacket:
    """Two-component packet with an explicit mixing angle."""
    terms0 = tuple(_packet_term(s, mass, 0) for s in samples0)
    terms1 = tuple(_packet_term(s, mass, 1) for s in samples1)
    return WavePacket(float(mass), float(theta0), terms0, terms1)


def rescaled_packet(packet: WavePacket, factor: float) -> WavePacket:
    """Packet with every amplitude multiplied by `factor`."""
    scale0 = tuple(PacketTerm(t.amplitude * factor, t.k, t.u) for t in packet.terms0)
    scale1 = tuple(PacketTerm(t.amplitude * factor, t.k, t.u) for t in packet.terms1)
    return WavePacket(packet.mass, packet.theta0, scale0, scale1)


# ---------------------------------------------------------------------------
# certification


def _certification_points(extent: float = 3.0, count: int = _CERT_POINTS) -> np.ndarray:
    rng = np.random.default_rng(_CERT_SEED)
    return rng.uniform(-extent, extent, size=(count, 4))


def certify_solution(sol: PlaneWaveSolution, tol: float = 1e-12) -> float:
    """Verify the analytic field-equation residual and dispersion of a
    constructed solution; raise CertificationError on failure."""
    from .verify import dirac_residual

    for k in (sol.k0, sol.k1):
        if dispersion_residual(k, sol.mass) > tol:
            raise CertificationError(
                f"stored momentum {k} violates the dispersion relation for m={sol.mass}"
            )
    res = dirac_residual(sol, points=_certification_points())
    k_scale = max(
        1.0,
        float(np.abs(sol.k0.as_array()).max()),
        float(np.abs(sol.k1.as_array()).max()),
        sol.mass,
    )
    u_scale = max(1.0, float(np.linalg.norm(sol.u0)), float(np.linalg.norm(sol.u1)))
    if res > tol * k_scale * u_scale:
        raise CertificationError(
            f"solution {sol.label!r} failed residual certification: {res:.3e}"
        )
    return res


# ---------------------------------------------------------------------------
# JSON schemas for the solution specs


def massive_spec_to_dict(spec: MassiveSpec) -> dict:
    e = {1: "+", -1: "-"}
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "massive",
        "mass": spec.mass,
        "theta0": spec.theta0,
        "kvec0": list(spec.kvec0),
        "kvec1": list(spec.kvec1),
        "spin0": spec.spin0,
        "spin1": spec.spin1,
        "esign0": e[spec.esign0],
        "esign1": e[spec.esign1],
        "norm_choice": spec.norm_choice,
    }


def _require(d: dict, key: str):
    if key not in d:
        raise ValueError(f"missing field {key!r}")
    return d[key]


def _parse_sign(value, key: str) -> int:
    if value in (1, -1):
        return int(value)
    if value == "+":
        return 1
    if value == "-":
        return -1
    raise ValueError(f"field {key!r} must be '+', '-', +1 or -1, got {value!r}")


def massive_spec_from_dict(d: dict) -> MassiveSpec:
    try:
        return MassiveSpec(
            mass=float(_require(d, "mass")),
            theta0=float(_require(d, "theta0")),
            kvec0=_require(d, "kvec0"),
            kvec1=_require(d, "kvec1"),
            spin0=d.get("spin0", "up"),
            spin1=d.get("spin1", "up"),
            esign0=_parse_sign(d.get("esign0", "+"), "esign0"),
            esign1=_parse_sign(d.get("esign1", "-"), "esign1"),
            norm_choice=d.get("norm_choice", "E_over_m"),
        )
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed massive spec: {exc}") from exc


def massless_theta_spec_to_dict(spec: MasslessThetaSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "massless_theta",
        "theta": list(spec.theta.as_array()),
        "kappa0": spec.kappa0,
        "kappa1": spec.kappa1,
        "theta0": spec.theta0,
        "chirality0": spec.chirality0,
        "chirality1": spec.chirality1,
    }


def massless_theta_spec_from_dict(d: dict) -> MasslessThetaSpec:
    try:
        return MasslessThetaSpec(
            theta=FourVector.from_array(_require(d, "theta")),
            kappa0=float(_require(d, "kappa0")),
            kappa1=float(_require(d, "kappa1")),
            theta0=float(d.get("theta0", 0.0)),
            chirality0=d.get("chirality0", "R"),
            chirality1=d.get("chirality1", "R"),
        )
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed massless theta spec: {exc}") from exc


def packet_spec_to_dict(spec: WavePacketSpec) -> dict:
    e = {1: "+", -1: "-"}
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "packet",
        "component": spec.component,
        "mass": spec.mass,
        "samples": [
            {
                "kvec": list(s.kvec),
                "amplitude": s.amplitude,
                "spin": s.spin,
                "esign": e[s.esign],
            }
            for s in spec.samples
        ],
    }


def packet_spec_from_dict(d: dict) -> WavePacketSpec:
    samples = []
    raw = _require(d, "samples")
    if not isinstance(raw, (list, tuple)):
        raise ValueError("field 'samples' must be a list")
    mass = float(_require(d, "mass"))
    for idx, s in enumerate(raw):
        try:
            sample = PacketSample(
                kvec=_require(s, "kvec"),
                amplitude=float(_require(s, "amplitude")),
                spin=s.get("spin", "up"),
                esign=_parse_sign(s.get("esign", "+"), "esign"),
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed sample {idx}: {exc}") from exc
        if "energy" in s:
            expected = mass_shell_energy(sample.kvec, mass, sample.esign)
            got = float(s["energy"])
            if abs(got - expected) > 1e-9 * max(1.0, abs(expected)):
                raise ValueError(
                    f"sample {idx} field 'energy' {got} is off shell "
                    f"(expected {expected} for kvec={sample.kvec}, mass={mass})"
                )
        samples.append(sample)
    return WavePacketSpec(
        component=int(_require(d, "component")),
        mass=mass,
        samples=tuple(samples),
    )
