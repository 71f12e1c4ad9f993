import dataclasses
import math

import numpy as np
import pytest

from qdirac import (
    CertificationError,
    FourVector,
    MassiveSpec,
    MasslessThetaSpec,
    PacketSample,
    PlaneWaveSolution,
    WavePacketSpec,
    build_massive_solution,
    build_massless_theta_solution,
    build_u_spinor,
    build_wave_packet,
    certify_solution,
    check_constraints,
    dirac_residual,
    enumerate_massive_set,
    enumerate_massless_theta0_set,
    inner_product_grid,
    mass_shell_energy,
    slashed,
    SpacetimeGrid,
)
from qdirac.solutions import (
    massive_spec_from_dict,
    massive_spec_to_dict,
    massless_theta_spec_from_dict,
    massless_theta_spec_to_dict,
    packet_spec_from_dict,
    packet_spec_to_dict,
    rescaled_packet,
)
from helpers import in_span, null_space, random_null_fourvector

RNG_POINTS = np.random.default_rng(77).uniform(-3, 3, size=(40, 4))


# --- mass shell -------------------------------------------------------------

def test_mass_shell_rest_frame():
    assert mass_shell_energy((0, 0, 0), 1.0) == 1.0


def test_mass_shell_pythagorean():
    assert mass_shell_energy((3, 0, 0), 4.0) == 5.0


def test_mass_shell_dispersion():
    rng = np.random.default_rng(1)
    for _ in range(100):
        kvec = rng.uniform(-3, 3, size=3)
        m = rng.uniform(0.1, 4.0)
        sign = 1 if rng.uniform() < 0.5 else -1
        k = FourVector(mass_shell_energy(kvec, m, sign), *kvec)
        assert abs(k.dot(k) - m * m) <= 1e-14 * (k.t**2 + m * m)


def test_mass_shell_rejects_null_zero():
    with pytest.raises(ValueError):
        mass_shell_energy((0, 0, 0), 0.0)
    with pytest.raises(ValueError):
        mass_shell_energy((1, 0, 0), -1.0)


# --- u spinors ----------------------------------------------------------------

def test_u_spinor_rest_frame_exact():
    # at rest with mass_sign +1 the kernel is the upper block; with
    # E_over_m the normalization is exactly 1
    u = build_u_spinor(FourVector(2.0, 0, 0, 0), 2.0, mass_sign=1, spin="up",
                       norm_choice="E_over_m")
    assert np.array_equal(u, np.array([1, 0, 0, 0], dtype=complex))
    d = build_u_spinor(FourVector(2.0, 0, 0, 0), 2.0, mass_sign=1, spin="down",
                       norm_choice="E_over_m")
    assert np.array_equal(d, np.array([0, 1, 0, 0], dtype=complex))


@pytest.mark.parametrize("mass_sign", [1, -1])
@pytest.mark.parametrize("esign", [1, -1])
def test_u_spinor_kernel_residual(mass_sign, esign):
    rng = np.random.default_rng(100 + 10 * mass_sign + esign)
    for _ in range(50):
        kvec = rng.uniform(-2, 2, size=3)
        m = rng.uniform(0.2, 3.0)
        k = FourVector(mass_shell_energy(kvec, m, esign), *kvec)
        for spin in ("up", "down"):
            u = build_u_spinor(k, m, mass_sign, spin)
            res = np.linalg.norm((slashed(k) - mass_sign * m * np.eye(4)) @ u)
            assert res <= 1e-12 * np.linalg.norm(u) * (abs(k.t) + m)


def test_u_spinor_normalization_both_choices():
    rng = np.random.default_rng(3)
    for _ in range(50):
        kvec = rng.uniform(-2, 2, size=3)
        m = rng.uniform(0.2, 3.0)
        esign = 1 if rng.uniform() < 0.5 else -1
        k = FourVector(mass_shell_energy(kvec, m, esign), *kvec)
        e = abs(k.t)
        for choice, want in (("E", e), ("E_over_m", e / m)):
            u = build_u_spinor(k, m, 1, "up", norm_choice=choice)
            assert abs(np.real(np.vdot(u, u)) - want) <= 1e-12 * want


def test_u_spinor_oracle_span():
    # independent dense null-space oracle: kernel is 2-dimensional and
    # contains the closed form; the two spin states span it
    rng = np.random.default_rng(4)
    for _ in range(50):
        kvec = rng.uniform(-2, 2, size=3)
        m = rng.uniform(0.2, 3.0)
        mass_sign = 1 if rng.uniform() < 0.5 else -1
        esign = 1 if rng.uniform() < 0.5 else -1
        k = FourVector(mass_shell_energy(kvec, m, esign), *kvec)
        basis = null_space(slashed(k) - mass_sign * m * np.eye(4))
        assert basis.shape[1] == 2
        u_up = build_u_spinor(k, m, mass_sign, "up")
        u_dn = build_u_spinor(k, m, mass_sign, "down")
        assert in_span(u_up, basis) <= 1e-10
        assert in_span(u_dn, basis) <= 1e-10
        overlap = basis.conj().T @ np.stack([u_up, u_dn], axis=1)
        assert np.linalg.matrix_rank(overlap, tol=1e-8) == 2


def test_u_spinor_phase_convention():
    rng = np.random.default_rng(5)
    for _ in range(30):
        kvec = rng.uniform(-2, 2, size=3)
        m = rng.uniform(0.2, 3.0)
        u = build_u_spinor(FourVector(mass_shell_energy(kvec, m), *kvec), m, 1, "down")
        nrm = np.linalg.norm(u)
        lead = next(c for c in u if abs(c) > 1e-12 * nrm)
        assert abs(lead.imag) <= 1e-15 * nrm
        assert lead.real > 0


def test_u_spinor_input_validation():
    with pytest.raises(ValueError):
        build_u_spinor(FourVector(1.5, 0, 0, 0), 1.0, 1, "up")  # off shell
    with pytest.raises(ValueError):
        build_u_spinor(FourVector(1.0, 0, 0, 0), -1.0, 1, "up")
    with pytest.raises(ValueError):
        build_u_spinor(FourVector(1.0, 0, 0, 0), 1.0, 2, "up")


# --- massive solutions -----------------------------------------------------------

def test_symplectic_limits():
    kvec = (0.3, -0.5, 0.8)
    m = 1.4
    e_over_m = mass_shell_energy(kvec, m) / m
    pure_c = build_massive_solution(MassiveSpec(m, 0.0, kvec, kvec))
    s = pure_c.evaluate(FourVector(0.7, 0.1, -0.2, 0.4))
    assert np.abs(s.psi1).max() == 0.0
    assert pure_c.density(FourVector()) == pytest.approx(e_over_m, rel=1e-14)

    pure_j = build_massive_solution(MassiveSpec(m, math.pi / 2, kvec, kvec))
    s = pure_j.evaluate(FourVector(0.7, 0.1, -0.2, 0.4))
    assert np.abs(s.psi0).max() <= 1e-16 * np.abs(s.psi1).max()
    assert pure_j.density(FourVector()) == pytest.approx(e_over_m, rel=1e-14)


def test_density_generic_mixture():
    rng = np.random.default_rng(6)
    for _ in range(20):
        kvec0 = rng.uniform(-2, 2, size=3)
        kvec1 = rng.uniform(-2, 2, size=3)
        m = rng.uniform(0.2, 3.0)
        t0 = rng.uniform(0, 2 * math.pi)
        sol = build_massive_solution(MassiveSpec(m, t0, kvec0, kvec1))
        e0 = mass_shell_energy(kvec0, m) / m
        e1 = mass_shell_energy(kvec1, m) / m
        want = math.cos(t0) ** 2 * e0 + math.sin(t0) ** 2 * e1
        for pt in RNG_POINTS[:8]:
            assert abs(sol.density(FourVector(*pt)) - want) <= 1e-12 * max(want, 1.0)


def test_massive_spec_pairing_enforced():
    with pytest.raises(ValueError):
        MassiveSpec(1.0, 0.0, (0, 0, 1), (0, 0, 1), esign0=1, esign1=1)


def test_enumerate_massive_set_labels_and_residuals():
    sols = enumerate_massive_set(1.1, (0.2, 0.3, -0.4), (0.5, 0.0, 0.1), math.pi / 5)
    assert len(sols) == 8
    labels = [s.label for s in sols]
    assert labels == ["uu+-", "uu-+", "dd+-", "dd-+",
                      "ud+-", "ud-+", "du+-", "du-+"]
    for s in sols:
        assert dirac_residual(s, points=RNG_POINTS) <= 1e-12


def test_complex_limit_degeneracy():
    # at theta0 = 0 only the complex half survives, so solutions sharing
    # (spin0, branch) coincide as fields
    sols = enumerate_massive_set(1.0, (0.1, 0.2, 0.3), (0.1, 0.2, 0.3), 0.0)
    by_label = {s.label: s for s in sols}
    x = FourVector(0.3, -0.7, 0.2, 1.1)
    for a, b in (("uu+-", "ud+-"), ("dd-+", "du-+")):
        sa, sb = by_label[a].evaluate(x), by_label[b].evaluate(x)
        assert np.array_equal(sa.psi0, sb.psi0)
        assert np.array_equal(sa.psi1, sb.psi1)


def test_certification_rejects_off_shell_momentum():
    sol = build_massive_solution(MassiveSpec(1.0, 0.3, (0, 0, 1), (0, 0, 1)))
    broken = dataclasses.replace(sol, k0=FourVector(sol.k0.t + 0.3, *sol.k0.spatial()))
    with pytest.raises(CertificationError):
        certify_solution(broken)


# --- constraint reports -----------------------------------------------------------

def test_constraints_null_theta_proportional():
    theta = FourVector(1, 0, 0, 1)
    rep = check_constraints(theta, theta.scale(3.0), theta.scale(-2.0), 0.0)
    assert rep.all_passed
    assert rep.kappa0 == pytest.approx(3.0)
    assert rep.kappa1 == pytest.approx(-2.0)


def test_constraints_massive_with_theta_rejected():
    theta = FourVector(1, 0, 0, 1)
    rep = check_constraints(theta, theta.scale(3.0), theta.scale(-2.0), 1.0)
    assert not rep.all_passed
    assert not rep.check("massless_required").passed


def test_constraints_vacuous_for_zero_theta():
    rep = check_constraints(FourVector(), FourVector(1, 0, 0, 0), FourVector(1, 0, 0, 0), 1.0)
    assert all(c.vacuous for c in rep.checks)
    assert rep.all_passed


def test_constraints_detect_nonproportional():
    theta = FourVector(1, 0, 0, 1)
    k = FourVector(1, 0.5, 0, 1)
    rep = check_constraints(theta, k, theta.scale(1.0), 0.0)
    assert not rep.check("k0_proportional").passed


# --- massless theta family ---------------------------------------------------------

def test_massless_theta_kernel_dimension_oracle():
    theta = FourVector(1, 0, 0, 1)
    assert null_space(slashed(theta)).shape[1] == 2


def test_massless_theta_solution_certified():
    rng = np.random.default_rng(8)
    for _ in range(20):
        theta = random_null_fourvector(rng)
        spec = MasslessThetaSpec(theta=theta, kappa0=rng.uniform(0.5, 2),
                                 kappa1=-rng.uniform(0.5, 2), theta0=rng.uniform(0, 6),
                                 chirality0="L", chirality1="R")
        sol = build_massless_theta_solution(spec)
        assert dirac_residual(sol, points=RNG_POINTS) <= 1e-12
        basis = null_space(slashed(theta))
        assert in_span(sol.u0, basis) <= 1e-10
        assert in_span(sol.u1, basis) <= 1e-10
        assert abs(sol.k0.dot(spec.theta)) <= 1e-12
        assert abs(sol.k1.dot(spec.theta)) <= 1e-12


def test_massless_theta_unit_kappas_reduce_to_plane_waves():
    # the phase map e^{+-i Theta} turns the running-phase solution into
    # plain massless plane waves at momenta (kappa -+ 1) theta, which
    # must again satisfy the field equation
    theta = FourVector(1, 0, 0, 1)
    spec = MasslessThetaSpec(theta=theta, kappa0=1.0, kappa1=1.0, theta0=0.0,
                             chirality0="R", chirality1="R")
    sol = build_massless_theta_solution(spec)
    for shift in (1.0, -1.0):
        mapped = PlaneWaveSolution(
            theta0=0.0,
            k0=sol.k0 + theta.scale(shift),
            k1=sol.k1 + theta.scale(shift),
            u0=sol.u0, u1=sol.u1, mass=0.0,
        )
        assert dirac_residual(mapped, points=RNG_POINTS) <= 1e-12


def test_massless_theta_spec_validation():
    with pytest.raises(ValueError):
        MasslessThetaSpec(theta=FourVector(1, 0, 0, 0.5), kappa0=1, kappa1=1)  # not null
    with pytest.raises(ValueError):
        MasslessThetaSpec(theta=FourVector(), kappa0=1, kappa1=1)  # zero
    with pytest.raises(ValueError):
        MasslessThetaSpec(theta=FourVector(1, 0, 0, 1), kappa0=0.0, kappa1=1)


# --- massless constant-phase family -------------------------------------------------

def test_enumerate_massless_theta0_set():
    sols = enumerate_massless_theta0_set((0, 0, 1.3), (0.5, 0, 0.5), 0.9)
    assert len(sols) == 4
    assert [s.label for s in sols] == ["LL", "LR", "RL", "RR"]
    for s in sols:
        assert dirac_residual(s, points=RNG_POINTS) <= 1e-12


def test_massless_chirality_is_helicity():
    from qdirac import helicity_check

    sols = enumerate_massless_theta0_set((0, 0, 1.0), (0, 0.6, 0.8), 0.3)
    want = {"L": -0.5, "R": 0.5}
    for s in sols:
        rep = helicity_check(s)
        assert rep.h0 == pytest.approx(want[s.label[0]], abs=1e-12)
        assert rep.h1 == pytest.approx(want[s.label[1]], abs=1e-12)


def test_massless_zero_momentum_rejected():
    with pytest.raises(ValueError):
        enumerate_massless_theta0_set((0, 0, 0), (0, 0, 1), 0.0)


# --- wave packets --------------------------------------------------------------------

def test_single_sample_packet_equals_plane_wave():
    kvec = (0.2, -0.4, 0.9)
    m = 1.2
    packet = build_wave_packet(WavePacketSpec(0, m, (PacketSample(kvec, 1.0, "up", 1),)))
    plane = build_massive_solution(MassiveSpec(m, 0.0, kvec, kvec, spin0="up", esign0=1))
    for pt in RNG_POINTS[:10]:
        a = packet.evaluate(FourVector(*pt))
        b = plane.evaluate(FourVector(*pt))
        assert np.abs(a.psi0 - b.psi0).max() <= 1e-14
        assert np.abs(a.psi1).max() == 0.0
    assert dirac_residual(packet, points=RNG_POINTS) <= 1e-12


def test_two_sample_interference_pattern():
    # equal weights at +-k_z: density(z) = 2 E/m (1 + cos(2 k_z z) * f)
    # with f the normalized spinor overlap; checked against pointwise
    # evaluation and the closed form
    kz = 0.8
    m = 1.0
    spec = WavePacketSpec(0, m, (
        PacketSample((0, 0, kz), 1.0, "up", 1),
        PacketSample((0, 0, -kz), 1.0, "up", 1),
    ))
    packet = build_wave_packet(spec)
    u_plus = packet.terms0[0].u
    u_minus = packet.terms0[1].u
    overlap = complex(np.vdot(u_plus, u_minus))
    e_over_m = mass_shell_energy((0, 0, kz), m) / m
    assert abs(overlap.imag) <= 1e-15
    for z in np.linspace(-3, 3, 17):
        x = FourVector(0.0, 0.0, 0.0, z)
        s = packet.evaluate(x)
        direct = float(np.sum(np.abs(s.psi0) ** 2 + np.abs(s.psi1) ** 2))
        assert packet.density(x) == pytest.approx(direct, rel=1e-13)
        want = 2 * e_over_m + 2 * overlap.real * math.cos(2 * kz * z)
        assert direct == pytest.approx(want, abs=1e-12)


def test_gaussian_packet_normalizable():
    rng = np.random.default_rng(12)
    n = 64
    length = 2 * math.pi
    base = 2 * math.pi / length
    harmonics = rng.integers(-4, 5, size=(n, 3))
    weights = np.exp(-0.5 * np.sum(harmonics**2, axis=1) / 4.0)
    samples = tuple(
        PacketSample(tuple(base * h), float(w), "up", 1)
        for h, w in zip(harmonics, weights)
        if np.any(h != 0)
    )
    packet = build_wave_packet(WavePacketSpec(0, 1.0, samples))
    cells = 10
    grid = SpacetimeGrid(FourVector(0, 0, 0, 0),
                         (1.0, length / cells, length / cells, length / cells),
                         (1, cells, cells, cells), (False, True, True, True))
    norm = inner_product_grid(packet, packet, grid)
    assert norm > 0
    rescaled = rescaled_packet(packet, 1.0 / math.sqrt(norm))
    assert inner_product_grid(rescaled, rescaled, grid) == pytest.approx(1.0, abs=1e-10)


def test_packet_spec_validation():
    with pytest.raises(ValueError):
        WavePacketSpec(2, 1.0, (PacketSample((0, 0, 1), 1.0),))
    with pytest.raises(ValueError):
        WavePacketSpec(0, 1.0, ())


# --- JSON schemas ---------------------------------------------------------------------

def test_massive_spec_json_round_trip():
    spec = MassiveSpec(1.5, 0.7, (0.1, 0.2, 0.3), (0, 0, 1), "down", "up", -1, 1, "E")
    d = massive_spec_to_dict(spec)
    assert d["esign0"] == "-" and d["kind"] == "massive"
    assert massive_spec_from_dict(d) == spec


def test_massless_theta_spec_json_round_trip():
    spec = MasslessThetaSpec(FourVector(1, 0, 0, 1), 2.0, -1.0, 0.3, "L", "R")
    d = massless_theta_spec_to_dict(spec)
    assert massless_theta_spec_from_dict(d) == spec


def test_packet_spec_json_round_trip():
    spec = WavePacketSpec(1, 0.0, (PacketSample((0, 0, 2), 0.5, "down", -1),))
    d = packet_spec_to_dict(spec)
    assert packet_spec_from_dict(d) == spec


def test_spec_json_missing_fields_named():
    with pytest.raises(ValueError, match="mass"):
        massive_spec_from_dict({"theta0": 0.0, "kvec0": [0, 0, 1], "kvec1": [0, 0, 1]})
    with pytest.raises(ValueError, match="kappa0"):
        massless_theta_spec_from_dict({"theta": [1, 0, 0, 1], "kappa1": 1.0})
    with pytest.raises(ValueError, match="samples"):
        packet_spec_from_dict({"component": 0, "mass": 1.0})


def test_packet_spec_off_shell_energy_rejected():
    cfg = {
        "component": 0,
        "mass": 1.0,
        "samples": [{"kvec": [0, 0, 1], "amplitude": 1.0, "energy": 2.0}],
    }
    with pytest.raises(ValueError, match="off shell"):
        packet_spec_from_dict(cfg)
