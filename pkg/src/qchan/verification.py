"""Numerical verification: CPTP ranges, constant-norm behaviour, identities.

Everything here returns plain records with the measured numbers embedded,
so a report can be re-checked without re-running the computation.  The
conventions:

* complete positivity is decided by the smallest Choi eigenvalue with a
  threshold scaled to the Choi matrix's Frobenius norm;
* trace preservation is the partial trace of the Choi matrix over the
  output factor against the identity;
* the constant-norm criterion for diagonal channels is that all n^2 - 1
  multiplier moduli agree, in which case every pure input maps to output
  Frobenius norm sqrt(1/n + t^2 (1 - 1/n)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Callable, Optional, Sequence

import numpy as np

from .basis import build_basis, m_z, pair_count, pairs, pauli_matrix
from .channels import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    AnyChannel,
    DiagonalChannel,
    Family,
    FamilyChannel,
    QubitLambda,
    as_linear_map,
    cptp_range,
    family_apply,
    family_to_diagonal,
    random_pure_state,
    repr_coefficients,
    to_choi,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    frobenius_norm,
    hermitian_eigenvalues,
    hermitian_part,
    is_psd,
    partial_trace_second,
)

__all__ = [
    "VerificationReport",
    "ParamRange",
    "QubitClassification",
    "param_range",
    "is_cptp",
    "constant_fnorm_criterion",
    "expected_constant_norm",
    "witness_states",
    "witness_state_labels",
    "constant_fnorm_sample_test",
    "dcq_det_formula",
    "dcq_det_matrix",
    "verify_det_recurrence",
    "sum_x",
    "sum_y",
    "sum_z",
    "verify_sum_identities",
    "verify_representations",
    "classify_qubit",
]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one numerical check, with the numbers that decided it."""

    passed: bool
    min_choi_eigenvalue: Optional[float] = None
    trace_violation: Optional[float] = None
    max_deviation: Optional[float] = None
    mean_deviation: Optional[float] = None
    witness: Optional[str] = None
    samples_used: int = 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "min_choi_eigenvalue": self.min_choi_eigenvalue,
            "trace_violation": self.trace_violation,
            "max_deviation": self.max_deviation,
            "mean_deviation": self.mean_deviation,
            "witness": self.witness,
            "samples_used": self.samples_used,
        }


@dataclass(frozen=True)
class ParamRange:
    """Closed CPTP parameter interval of one family at one dimension."""

    family: Family
    dim: int
    p_min: float
    p_max: float

    def contains(self, p: float, tol: Tolerance = DEFAULT_TOL) -> bool:
        slack = tol.bound(max(abs(self.p_min), abs(self.p_max)))
        return self.p_min - slack <= p <= self.p_max + slack

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "dim": self.dim,
            "p_min": self.p_min,
            "p_max": self.p_max,
        }


def param_range(family: Family, n: int) -> ParamRange:
    lo, hi = cptp_range(family, n)
    return ParamRange(family=family, dim=n, p_min=float(lo), p_max=float(hi))


def is_cptp(
    apply_fn: Callable[[np.ndarray], np.ndarray], n: int, tol: Tolerance = DEFAULT_TOL
) -> VerificationReport:
    """Choi-based complete positivity + trace preservation check."""

    choi = to_choi(apply_fn, n)
    scale = frobenius_norm(choi)
    herm_dev = float(np.max(np.abs(choi - choi.conj().T)))
    if herm_dev > tol.bound(scale):
        return VerificationReport(
            passed=False,
            witness=f"Choi matrix is not Hermitian (deviation {herm_dev:.3e})",
        )
    eigs = np.linalg.eigvalsh(hermitian_part(choi))
    smallest = float(eigs[0])
    trace_dev = float(np.max(np.abs(partial_trace_second(choi, n) - np.eye(n))))
    psd_ok = smallest >= -tol.bound(scale)
    tp_ok = trace_dev <= tol.bound(1.0)
    witness = None
    if not psd_ok:
        witness = f"negative Choi eigenvalue {smallest:.6e}"
    elif not tp_ok:
        witness = f"partial trace deviates from identity by {trace_dev:.3e}"
    return VerificationReport(
        passed=psd_ok and tp_ok,
        min_choi_eigenvalue=smallest,
        trace_violation=trace_dev,
        witness=witness,
    )


def constant_fnorm_criterion(
    ch: AnyChannel, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, Optional[float]]:
    """(holds, expected output norm) — holds iff all multiplier moduli agree."""

    diag = family_to_diagonal(ch) if isinstance(ch, FamilyChannel) else ch
    moduli = np.abs(diag.t)
    spread = float(moduli.max() - moduli.min())
    if spread > tol.bound(float(moduli.max())):
        return False, None
    return True, expected_constant_norm(diag.dim, float(moduli[0]))


def expected_constant_norm(n: int, t: float) -> float:
    """Output Frobenius norm on pure inputs when all moduli equal |t|."""
    return sqrt(1 / n + t * t * (1 - 1 / n))


def witness_states(n: int) -> list[np.ndarray]:
    """The n^2 pure states that pin down a diagonal channel's output norms.

    Computational projectors first, then (e_k + e_l)/sqrt(2) projectors,
    then (i e_k + e_l)/sqrt(2) projectors, pairs in lexicographic order.
    """

    states: list[np.ndarray] = []
    for k in range(n):
        v = np.zeros(n, dtype=complex)
        v[k] = 1
        states.append(np.outer(v, v.conj()))
    for phase in (1.0, 1j):
        for k, l in pairs(n):
            v = np.zeros(n, dtype=complex)
            v[k - 1] = phase
            v[l - 1] = 1
            v /= np.linalg.norm(v)
            states.append(np.outer(v, v.conj()))
    return states


def witness_state_labels(n: int) -> list[str]:
    labels = [f"psi_{k}" for k in range(n)]
    labels += [f"xi_({k},{l})" for k, l in pairs(n)]
    labels += [f"eta_({k},{l})" for k, l in pairs(n)]
    return labels


def constant_fnorm_sample_test(
    apply_fn: Callable[[np.ndarray], np.ndarray],
    n: int,
    samples: int = 1000,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
) -> VerificationReport:
    """Empirical constant-norm check over witness states plus Haar samples.

    Passes when the spread of output Frobenius norms stays within
    tolerance of the largest observed norm; the witness field names the
    states achieving the extreme norms otherwise.
    """

    states = witness_states(n)
    labels = witness_state_labels(n)
    rng = np.random.default_rng(seed)
    for i in range(samples):
        states.append(random_pure_state(n, rng))
        labels.append(f"haar_{i}")
    norms = np.array([frobenius_norm(apply_fn(s)) for s in states])
    spread = float(norms.max() - norms.min())
    mean = float(norms.mean())
    passed = spread <= tol.bound(float(norms.max()))
    witness = None
    if not passed:
        witness = (
            f"norm spread {spread:.6e}: max {norms.max():.12f} at {labels[int(norms.argmax())]}, "
            f"min {norms.min():.12f} at {labels[int(norms.argmin())]}"
        )
    return VerificationReport(
        passed=passed,
        max_deviation=spread,
        mean_deviation=float(np.mean(np.abs(norms - mean))),
        witness=witness,
        samples_used=len(states),
    )


# --- Determinant recurrence ----------------------------------------------


def dcq_det_formula(n: int, p: float) -> float:
    """Closed form (2p + (1-p)/n)^(n-1) * (1 - (n-1)^2 p) / n."""
    return (2 * p + (1 - p) / n) ** (n - 1) * (1 - (n - 1) ** 2 * p) / n


def dcq_det_matrix(n: int, p: float) -> np.ndarray:
    """The n x n matrix with diagonal p + (1-p)/n and off-diagonal -p."""

    m = np.full((n, n), -p, dtype=float)
    np.fill_diagonal(m, p + (1 - p) / n)
    return m


def verify_det_recurrence(
    n: int,
    grid: int = 21,
    lo: float = -0.5,
    hi: float = 0.5,
    tol: Tolerance = Tolerance(absolute=1e-12, relative=1e-10),
) -> VerificationReport:
    """Compare the closed-form determinant with LAPACK over a p grid.

    The absolute floor matters: the formula has analytic zeros inside the
    grid (p = 1/(n-1)^2) where a purely relative comparison is vacuous.
    """

    worst = 0.0
    worst_p = lo
    passed = True
    for p in np.linspace(lo, hi, grid):
        formula = dcq_det_formula(n, float(p))
        direct = float(np.linalg.det(dcq_det_matrix(n, float(p))))
        dev = abs(formula - direct)
        if dev > worst:
            worst, worst_p = dev, float(p)
        if not tol.close(formula, direct):
            passed = False
    return VerificationReport(
        passed=passed,
        max_deviation=worst,
        witness=None if passed else f"formula/LAPACK determinant mismatch at p={worst_p}",
        samples_used=grid,
    )


# --- Conjugation-sum identities ------------------------------------------


def sum_x(s: np.ndarray, n: int) -> np.ndarray:
    """sum over pairs of sigma_x S sigma_x = S^T + Tr(S) I - 2 diag(S)."""
    return s.T + np.trace(s) * np.eye(n, dtype=complex) - 2 * np.diag(np.diag(s))


def sum_y(s: np.ndarray, n: int) -> np.ndarray:
    """sum over pairs of sigma_y S sigma_y = Tr(S) I - S^T."""
    return np.trace(s) * np.eye(n, dtype=complex) - s.T


def sum_z(s: np.ndarray, n: int) -> np.ndarray:
    """sum over pairs of sigma_z S sigma_z = n diag(S) - S."""
    return n * np.diag(np.diag(s)) - s


def _direct_sums(s: np.ndarray, n: int) -> dict[str, np.ndarray]:
    """Brute-force conjugation sums over the Pauli sectors and basis elements."""

    prs = pairs(n)
    out: dict[str, np.ndarray] = {}
    for sector in ("x", "y", "z"):
        mats = [pauli_matrix(n, sector, pr) for pr in prs]
        out[sector] = sum((m @ s @ m for m in mats), np.zeros((n, n), dtype=complex))
    basis = build_basis(n)
    for sector in ("x", "y", "z"):
        mats = [e for (sec, _), e in zip(basis.labels, basis.elements) if sec == sector]
        out["e" + sector] = sum((m @ s @ m for m in mats), np.zeros((n, n), dtype=complex))
    return out


def verify_sum_identities(
    n: int,
    trials: int = 50,
    seed: int = 0,
    tol: Tolerance = Tolerance(absolute=1e-12, relative=0.0),
) -> VerificationReport:
    """Check the closed conjugation-sum forms against brute-force sums.

    Uses generic complex inputs.  The closed x/y forms carry a transpose;
    the transpose-free variants coincide with them exactly on complex
    symmetric inputs, which is also verified and recorded in the witness
    text.
    """

    rng = np.random.default_rng(seed)
    eye = np.eye(n, dtype=complex)
    worst = 0.0
    worst_sym = 0.0
    for _ in range(trials):
        s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        direct = _direct_sums(s, n)
        closed = {
            "x": sum_x(s, n),
            "y": sum_y(s, n),
            "z": sum_z(s, n),
            "ex": sum_x(s, n) / 2,
            "ey": sum_y(s, n) / 2,
            "ez": np.diag(np.diag(s)) - s / n,
        }
        for key, mat in closed.items():
            worst = max(worst, float(np.max(np.abs(direct[key] - mat))))
        # Transpose-free variants on a complex symmetric input.
        sym = (s + s.T) / 2
        direct_sym = _direct_sums(sym, n)
        printed = {
            "x": sym + np.trace(sym) * eye - 2 * np.diag(np.diag(sym)),
            "y": np.trace(sym) * eye - sym,
            "z": n * np.diag(np.diag(sym)) - sym.T,
        }
        for key, mat in printed.items():
            worst_sym = max(worst_sym, float(np.max(np.abs(direct_sym[key] - mat))))
    passed = worst <= tol.bound(1.0) and worst_sym <= tol.bound(1.0)
    return VerificationReport(
        passed=passed,
        max_deviation=worst,
        witness=(
            f"transpose-free variants on symmetric inputs: max deviation {worst_sym:.3e}"
        ),
        samples_used=trials,
    )


def verify_representations(
    family: Family,
    p: float,
    n: int,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerance = Tolerance(absolute=1e-12, relative=0.0),
) -> VerificationReport:
    """Both conjugation-sum expansions against the closed family form."""

    coeffs = repr_coefficients(family, p, n)
    prs = pairs(n)
    sigma = {
        sector: [pauli_matrix(n, sector, pr) for pr in prs] for sector in ("x", "y", "z")
    }
    basis = build_basis(n)
    e_elems = {
        sector: [e for (sec, _), e in zip(basis.labels, basis.elements) if sec == sector]
        for sector in ("x", "y", "z")
    }
    e0 = basis.elements[0]
    ch = FamilyChannel(family=family, p=p, dim=n)
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_mean = 0.0
    for _ in range(trials):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s = hermitian_part(g)
        expected = family_apply(ch, s)
        pauli_form = coeffs.c0 * s
        for weight, mats in ((coeffs.cx, sigma["x"]), (coeffs.cy, sigma["y"]), (coeffs.cz, sigma["z"])):
            for m in mats:
                pauli_form += weight * (m @ s @ m)
        basis_form = coeffs.e0 * (e0 @ s @ e0)
        for weight, mats in ((coeffs.ex, e_elems["x"]), (coeffs.ey, e_elems["y"]), (coeffs.ez, e_elems["z"])):
            for m in mats:
                basis_form += weight * (m @ s @ m)
        dev = max(
            float(np.max(np.abs(pauli_form - expected))),
            float(np.max(np.abs(basis_form - expected))),
        )
        worst = max(worst, dev)
        worst_mean += dev
    passed = worst <= tol.bound(1.0)
    return VerificationReport(
        passed=passed,
        max_deviation=worst,
        mean_deviation=worst_mean / trials if trials else None,
        witness=None if passed else f"representation mismatch {worst:.3e} for {family.value}, p={p}, n={n}",
        samples_used=trials,
    )


# --- Qubit classification -------------------------------------------------


@dataclass(frozen=True)
class QubitClassification:
    """Verdict of the constant-norm trichotomy for a qubit channel.

    ``tag`` is "completely_depolarizing" (lam = 0; ``fixed_output`` holds
    the constant output state), "diagonal" (t = 0, equal moduli;
    ``variant`` in 1..4 and ``p`` = |lam_z| describe the member), or
    "not_constant_norm".
    """

    tag: str
    fixed_output: Optional[np.ndarray] = None
    variant: Optional[int] = None
    p: Optional[float] = None


_VARIANT_BY_SIGNS = {(1, 1): 1, (1, -1): 2, (-1, -1): 3, (-1, 1): 4}


def classify_qubit(l: QubitLambda, tol: Tolerance = DEFAULT_TOL) -> QubitClassification:
    """Decide whether a qubit channel has constant output norm, and how.

    Diagonal members are normalized to lam_z >= 0 by flipping the signs of
    lam_z and lam_x together (a sigma_y conjugation), so all eight sign
    patterns collapse onto the four canonical variants.
    """

    t = np.array(l.t)
    lam = np.array(l.lam)
    eps = tol.bound(1.0)
    if np.all(np.abs(lam) <= eps):
        if np.linalg.norm(t) > 1 + eps:
            raise ValueError(f"translation {l.t} leaves the Bloch ball: not a channel")
        fixed = np.eye(2, dtype=complex) / 2
        for t_a, sig in zip(l.t, (PAULI_X, PAULI_Y, PAULI_Z)):
            fixed = fixed + t_a * sig / 2
        return QubitClassification(tag="completely_depolarizing", fixed_output=fixed)
    moduli = np.abs(lam)
    if np.all(np.abs(t) <= eps) and float(moduli.max() - moduli.min()) <= eps:
        signs = np.where(lam >= 0, 1, -1)
        if signs[2] < 0:
            signs[2] = -signs[2]
            signs[0] = -signs[0]
        variant = _VARIANT_BY_SIGNS[(int(signs[0]), int(signs[1]))]
        return QubitClassification(tag="diagonal", variant=variant, p=float(moduli.mean()))
    return QubitClassification(tag="not_constant_norm")
