"""(In)equivalence machinery for the four channel families.

Two channels are called equivalent when unitary or antiunitary
conjugations before and after one of them produce the other.  Such
conjugations preserve output spectra on isospectral inputs, and they can
only connect whole parameter ranges affinely; both facts yield
machine-checkable *in*equivalence certificates:

* a spectrum witness — two isospectral pure inputs whose outputs under
  one family member have different spectra, impossible for any channel
  conjugate to a depolarizing-type member, which maps every pure state
  to outputs with one fixed spectrum;
* a bound-matching obstruction — equivalence would force the affine
  reparameterization ratio to align both CPTP interval endpoints, and
  the resulting polynomial systems have no integer roots n >= 3.

At dimension 2 all four families are equivalent via explicit Pauli
conjugations, which :func:`qubit_equivalence_check` verifies numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import sympy

from .channels import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DiagonalChannel,
    Family,
    FamilyChannel,
    cptp_range,
    diagonal_apply,
    family_apply,
    random_pure_state,
)
from .linalg import Tolerance, hermitian_eigenvalues
from .verification import VerificationReport, param_range

__all__ = [
    "SpectrumWitness",
    "AlphaInterval",
    "BoundMatchingReport",
    "InequivalenceCertificate",
    "spectrum_witness",
    "scale_family",
    "alpha_interval",
    "bound_matching_system",
    "qubit_equivalence_check",
    "inequivalence_certificate",
]

_HYBRID = (Family.DCQ, Family.TCQ)
_BASE = (Family.DEP, Family.TRD)


@dataclass(frozen=True)
class SpectrumWitness:
    """Two isospectral pure inputs and the spectra of their outputs.

    ``state_a`` is a computational basis projector, ``state_b`` the
    projector onto the uniform superposition; both are rank one, hence
    isospectral.  Spectra are ascending; ``max_spectral_gap`` is the
    largest entrywise difference of the sorted spectra.
    """

    family: Family
    p: float
    dim: int
    state_a: np.ndarray
    state_b: np.ndarray
    spectrum_a: np.ndarray
    spectrum_b: np.ndarray
    max_spectral_gap: float
    notes: str = ""

    def to_json(self) -> dict:
        from .linalg import matrix_to_json

        return {
            "family": self.family.value,
            "p": self.p,
            "dim": self.dim,
            "state_a": matrix_to_json(self.state_a),
            "state_b": matrix_to_json(self.state_b),
            "spectrum_a": [float(v) for v in self.spectrum_a],
            "spectrum_b": [float(v) for v in self.spectrum_b],
            "max_spectral_gap": self.max_spectral_gap,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class AlphaInterval:
    """Scaling factors alpha keeping alpha*p inside the CPTP range."""

    family: Family
    p: float
    dim: int
    alpha_min: float
    alpha_max: float

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "p": self.p,
            "dim": self.dim,
            "alpha_min": self.alpha_min,
            "alpha_max": self.alpha_max,
        }


@dataclass(frozen=True)
class BoundMatchingReport:
    """Roots of one endpoint-matching system, solved symbolically.

    ``roots`` are the dimensions at which an affine reparameterization
    could align both CPTP endpoints of the two families; ``feasible`` says
    whether the queried dimension is such a root.
    """

    pair: tuple[Family, Family]
    dim: int
    same_sign: bool
    roots: tuple[float, ...]
    roots_exact: tuple[str, ...]
    feasible: bool
    detail: str

    def to_json(self) -> dict:
        return {
            "pair": [self.pair[0].value, self.pair[1].value],
            "dim": self.dim,
            "same_sign": self.same_sign,
            "roots": list(self.roots),
            "roots_exact": list(self.roots_exact),
            "feasible": self.feasible,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class InequivalenceCertificate:
    """Self-contained evidence that two families are not conjugate.

    ``method`` is "spectrum_witness" (mixed pairs: one spectrum-preserving
    family, one not) or "bound_matching" (pairs within the same class).
    All concrete numbers are embedded so the certificate can be re-checked
    without this library.
    """

    pair: tuple[Family, Family]
    dim: int
    method: str
    witnesses: tuple[SpectrumWitness, ...] = ()
    bound_reports: tuple[BoundMatchingReport, ...] = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "pair": [self.pair[0].value, self.pair[1].value],
            "dim": self.dim,
            "method": self.method,
            "witnesses": [w.to_json() for w in self.witnesses],
            "bound_reports": [r.to_json() for r in self.bound_reports],
            "detail": self.detail,
        }


def _witness_inputs(n: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros((n, n), dtype=complex)
    a[0, 0] = 1
    b = np.ones((n, n), dtype=complex) / n
    return a, b


def spectrum_witness(family: Family, p: float, n: int) -> SpectrumWitness:
    """Output spectra of one family member on two isospectral pure inputs.

    For the depolarizing and transpose-depolarizing families the two
    spectra coincide for every p; for the to-classical families they
    differ whenever p != 0, with largest sorted-entry gap
    |p| * max(1 - 2/n, 2/n).
    """

    rng_info = param_range(family, n)
    if not rng_info.contains(p):
        raise ValueError(
            f"p={p} outside the CPTP range [{rng_info.p_min}, {rng_info.p_max}] "
            f"of {family.value} at dim {n}"
        )
    state_a, state_b = _witness_inputs(n)
    ch = FamilyChannel(family=family, p=p, dim=n)
    spectrum_a = hermitian_eigenvalues(family_apply(ch, state_a))
    spectrum_b = hermitian_eigenvalues(family_apply(ch, state_b))
    gap = float(np.max(np.abs(spectrum_a - spectrum_b)))
    if family in _HYBRID:
        notes = (
            "analytic spectra: basis projector -> {p + (1-p)/n, (1-p)/n x (n-1)}; "
            "uniform projector -> {-p + (1+p)/n, (1+p)/n x (n-1)} (both sum to 1); "
            "sorted-entry gap |p| * max(1 - 2/n, 2/n)"
        )
    else:
        notes = "family acts as S -> p S (or p S^T) plus a multiple of I: spectra coincide"
    return SpectrumWitness(
        family=family,
        p=p,
        dim=n,
        state_a=state_a,
        state_b=state_b,
        spectrum_a=spectrum_a,
        spectrum_b=spectrum_b,
        max_spectral_gap=gap,
        notes=notes,
    )


def scale_family(
    ch: FamilyChannel,
    alpha: float,
    trials: int = 20,
    seed: int = 0,
    tol: Tolerance = Tolerance(absolute=1e-12, relative=0.0),
) -> FamilyChannel:
    """Member with parameter alpha*p, after verifying the affine identity.

    Every family satisfies Phi(alpha p, S) = alpha Phi(p, S)
    + (1 - alpha)/n Tr(S) I; the identity is spot-checked on random pure
    states before the scaled member is returned.
    """

    scaled = FamilyChannel(family=ch.family, p=alpha * ch.p, dim=ch.dim)
    rng_info = param_range(ch.family, ch.dim)
    if not rng_info.contains(scaled.p):
        raise ValueError(
            f"alpha={alpha} drives p to {scaled.p}, outside "
            f"[{rng_info.p_min}, {rng_info.p_max}] for {ch.family.value} at dim {ch.dim}"
        )
    rng = np.random.default_rng(seed)
    n = ch.dim
    for _ in range(trials):
        s = random_pure_state(n, rng)
        lhs = family_apply(scaled, s)
        rhs = alpha * family_apply(ch, s) + (1 - alpha) / n * np.trace(s) * np.eye(n)
        if float(np.max(np.abs(lhs - rhs))) > tol.bound(1.0):
            raise RuntimeError(
                f"affine scaling identity violated for {ch.family.value}, "
                f"p={ch.p}, alpha={alpha}, dim={n}"
            )
    return scaled


def alpha_interval(family: Family, p: float, n: int) -> AlphaInterval:
    """All alpha with alpha*p inside the CPTP range (p = 0 is an error)."""

    if p == 0:
        raise ValueError("alpha interval is unbounded at p = 0")
    rng_info = param_range(family, n)
    if p > 0:
        lo, hi = rng_info.p_min / p, rng_info.p_max / p
    else:
        lo, hi = rng_info.p_max / p, rng_info.p_min / p
    return AlphaInterval(family=family, p=p, dim=n, alpha_min=lo, alpha_max=hi)


def bound_matching_system(
    pair: tuple[Family, Family], n: int, same_sign: bool
) -> BoundMatchingReport:
    """Solve one endpoint-matching system symbolically in the dimension.

    If conjugations mapped family A at parameter p onto family B at p~,
    the affine scaling freedom would identify the two alpha intervals; for
    parameters of equal (resp. opposite) sign that forces the ratio p~/p
    to match lower-to-lower and upper-to-upper (resp. crossed) endpoint
    quotients.  The report lists every dimension solving the system.
    """

    fam_a, fam_b = pair
    if fam_a is fam_b:
        raise ValueError("bound matching needs two distinct families")
    m = sympy.Symbol("n")
    lo_a, hi_a = cptp_range(fam_a, m)
    lo_b, hi_b = cptp_range(fam_b, m)
    if same_sign:
        equation = sympy.Eq(lo_b / lo_a, hi_b / hi_a)
    else:
        equation = sympy.Eq(hi_b / lo_a, lo_b / hi_a)
    solutions = sympy.solve(equation, m)
    solutions = sorted(solutions, key=lambda r: float(r))
    roots = tuple(float(r) for r in solutions)
    feasible = any(abs(r - n) <= 1e-12 for r in roots)
    detail = (
        f"ratio equation {sympy.sstr(equation.lhs)} = {sympy.sstr(equation.rhs)}; "
        f"roots {{{', '.join(sympy.sstr(r) for r in solutions)}}}; "
        + (
            f"dimension {n} solves the system"
            if feasible
            else f"no root equals {n}, so no affine reparameterization aligns both endpoints"
        )
    )
    return BoundMatchingReport(
        pair=pair,
        dim=n,
        same_sign=same_sign,
        roots=roots,
        roots_exact=tuple(sympy.sstr(r) for r in solutions),
        feasible=feasible,
        detail=detail,
    )


def qubit_equivalence_check(
    p: float,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerance = Tolerance(absolute=1e-12, relative=0.0),
) -> VerificationReport:
    """Verify the dimension-2 Pauli conjugations joining the four variants.

    With Phi_1..Phi_4 the diagonal qubit channels with multiplier signs
    (+,+,+), (+,-,+), (-,-,+), (-,+,+) times p:

    * sigma_y Phi_2(-p, S) sigma_y = Phi_1(p, S)
    * sigma_z Phi_3(p, S)  sigma_z = Phi_1(p, S)
    * sigma_x Phi_4(-p, S) sigma_x = Phi_1(p, S)

    checked entrywise on random pure states.
    """

    if not 0 < p < 1:
        raise ValueError(f"conjugation check expects 0 < p < 1, got {p}")
    signs = {1: (1, 1, 1), 2: (1, -1, 1), 3: (-1, -1, 1), 4: (-1, 1, 1)}

    def variant(idx: int, param: float) -> DiagonalChannel:
        sx, sy, sz = signs[idx]
        return DiagonalChannel(dim=2, t=np.array([sx * param, sy * param, sz * param]))

    phi1 = variant(1, p)
    cases = [
        ("sigma_y . Phi_2(-p) . sigma_y", PAULI_Y, variant(2, -p)),
        ("sigma_z . Phi_3(p) . sigma_z", PAULI_Z, variant(3, p)),
        ("sigma_x . Phi_4(-p) . sigma_x", PAULI_X, variant(4, -p)),
    ]
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_case = None
    for _ in range(trials):
        s = random_pure_state(2, rng)
        target = diagonal_apply(phi1, s)
        for name, sigma, channel in cases:
            conjugated = sigma @ diagonal_apply(channel, s) @ sigma
            dev = float(np.max(np.abs(conjugated - target)))
            if dev > worst:
                worst, worst_case = dev, name
    passed = worst <= tol.bound(1.0)
    return VerificationReport(
        passed=passed,
        max_deviation=worst,
        witness=None if passed else f"identity {worst_case} violated by {worst:.3e}",
        samples_used=trials,
    )


def _default_witness_p(family: Family, n: int) -> float:
    hi = float(cptp_range(family, n)[1])
    return min(0.2, 0.8 * hi)


def inequivalence_certificate(
    pair: tuple[Family, Family], n: int, p: Optional[float] = None
) -> InequivalenceCertificate:
    """Certificate that two distinct families are inequivalent at dim n >= 3.

    Mixed pairs (one of dep/trd, one of dcq/tcq) get a spectrum witness:
    the to-classical member sends isospectral pure inputs to outputs with
    different spectra, while the depolarizing-type member provably cannot.
    Same-class pairs get the two bound-matching obstructions instead,
    since both members preserve (or both break) spectra identically.
    """

    fam_a, fam_b = pair
    if fam_a is fam_b:
        raise ValueError("certificate needs two distinct families")
    if n == 2:
        raise ValueError(
            "at dimension 2 the four families are pairwise equivalent "
            "(see qubit_equivalence_check); no inequivalence certificate exists"
        )
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    hybrids = [f for f in pair if f in _HYBRID]
    bases = [f for f in pair if f in _BASE]
    if len(hybrids) == 1:
        hybrid, base = hybrids[0], bases[0]
        p_hybrid = p if p is not None else _default_witness_p(hybrid, n)
        p_base = p if p is not None else _default_witness_p(base, n)
        witness_h = spectrum_witness(hybrid, p_hybrid, n)
        witness_b = spectrum_witness(base, p_base, n)
        detail = (
            f"unitary/antiunitary conjugations preserve output spectra on isospectral "
            f"inputs; {base.value} outputs are isospectral for every parameter "
            f"(observed gap {witness_b.max_spectral_gap:.3e}), while {hybrid.value} at "
            f"p={p_hybrid} separates the two witnesses by {witness_h.max_spectral_gap:.6e}"
        )
        return InequivalenceCertificate(
            pair=pair,
            dim=n,
            method="spectrum_witness",
            witnesses=(witness_h, witness_b),
            detail=detail,
        )
    reports = (
        bound_matching_system(pair, n, same_sign=True),
        bound_matching_system(pair, n, same_sign=False),
    )
    detail = (
        "equivalence would let the affine scaling freedom align both CPTP interval "
        "endpoints; neither the same-sign nor the opposite-sign ratio system has a "
        f"root at dimension {n}"
    )
    return InequivalenceCertificate(
        pair=pair, dim=n, method="bound_matching", bound_reports=reports, detail=detail
    )
