"""Closed-form detection/success expressions plus exact enumeration oracles.

The closed forms cover the store-and-resend attack under the
``paper_analytic`` checker:

* the two per-round detection events have probabilities p*d*y^2/3 (fake
  qubit read as 1 while the home qubit read 1) and p*d/3 (anticorrelation
  broken while the home qubit read 0);
* one round therefore survives checking with probability
  1 - p*d*(1 + y^2)/3, and an n-round sequence with that to the n-th power.

Everything else here is an *enumeration oracle*: it walks every measurement
branch of an attacked round exactly (probabilities multiplied along the
way, nothing sampled) and scores it with the same rule table the protocol
uses.  The oracles confirm the closed forms and quantify what no closed
form covers — notably the strict checker's X-basis rules, under which the
measure-resend, store-resend, and entangle attacks are each caught in an
applicable X round (home outcome 0) with probability exactly 1/2,
independent of the fake-qubit amplitudes.  (A naive interference argument
suggests the store-resend X-round rate should depend on x - y; the
enumeration shows it does not: Alice's travel qubit is maximally mixed
given home outcome 0, so her X result is a fair coin regardless of what
Eve forwards to Bob.)
"""

from __future__ import annotations

from dataclasses import dataclass

from .attacks import ema_intercept, isra_intercept
from .protocol import DetectionDirective, evaluate_checks
from .statevec import Basis, StateVector, enumerate_qubit, make_w_state

_ZERO = 1e-15


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return float(value)


@dataclass(frozen=True)
class IsraParams:
    """Arguments of the sequence-success formula for the store-resend attack."""

    y: float
    p: float
    d: float
    n: int

    def __post_init__(self) -> None:
        _check_unit("y", self.y)
        _check_unit("p", self.p)
        _check_unit("d", self.d)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")


def bell_yield() -> float:
    """Probability a surviving round distills into a Bell pair: 2/3."""
    return 2.0 / 3.0


def imra_outcome_probs() -> tuple[float, float]:
    """Eve's Z-outcome distribution on an intercepted W travel qubit."""
    return (2.0 / 3.0, 1.0 / 3.0)


def isra_case_probs(y: float, p: float, d: float) -> tuple[float, float]:
    """Per-round probabilities of the two store-resend detection events.

    First component: home 1 while Bob reads the fake qubit as 1 (p*d*y^2/3).
    Second: home 0 with the Z anticorrelation broken (p*d/3).
    """
    _check_unit("y", y)
    _check_unit("p", p)
    _check_unit("d", d)
    return (p * d * y * y / 3.0, p * d / 3.0)


def isra_success_single(y: float, p: float, d: float) -> float:
    """Probability one store-resend round escapes the analytic checker."""
    rej1, rej2 = isra_case_probs(y, p, d)
    return 1.0 - (rej1 + rej2)


def isra_success_sequence(params: IsraParams) -> float:
    """Probability a whole n-round store-resend sequence escapes detection.

    Strictly positive for any finite n, decreasing in n whenever
    p*d*(1+y^2) > 0 — the attack is caught with probability approaching,
    but never reaching, one.
    """
    return isra_success_single(params.y, params.p, params.d) ** params.n


# ---------------------------------------------------------------------------
# enumeration oracles


def _attacked_round_branches(kind: str, y: float | None) -> list[tuple[float, StateVector]]:
    """The round state(s) Eve leaves behind, as (weight, state) branches.

    The measure-resend attack is a classical mixture over Eve's outcome;
    the others leave a single pure state.
    """
    w = make_w_state()
    if kind == "none":
        return [(1.0, w)]
    if kind == "imra":
        return [
            (branch.probability, branch.post_state)
            for branch in enumerate_qubit(w, "b", Basis.Z)
            if branch.probability > _ZERO
        ]
    if kind == "isra":
        if y is None:
            raise ValueError("the store-resend oracle needs the fake amplitude y")
        _check_unit("y", y)
        state, _ = isra_intercept(w, x=float((1.0 - y * y) ** 0.5), y=float(y))
        return [(1.0, state)]
    if kind == "ema":
        state, _ = ema_intercept(w)
        return [(1.0, state)]
    raise ValueError(f"unknown attack kind {kind!r}")


def _violation_probability(state: StateVector, basis: Basis, mode: str, home_outcome: int | None = None) -> float:
    """Exact P(checking rule violated) for one detection round on ``state``.

    Charlie Z-measures the home qubit, then Alice and Bob measure their
    travel qubits in ``basis``; every branch is scored with the protocol's
    own rule table.  With ``home_outcome`` given, the probability is
    conditioned on that home result instead.
    """
    directive = [DetectionDirective(1, basis)]
    total = 0.0
    norm = 0.0
    for bc in enumerate_qubit(state, "c", Basis.Z):
        if bc.probability <= _ZERO:
            continue
        if home_outcome is not None and bc.outcome != home_outcome:
            continue
        norm += bc.probability
        for ba in enumerate_qubit(bc.post_state, "a", basis):
            if ba.probability <= _ZERO:
                continue
            for bb in enumerate_qubit(ba.post_state, "b", basis):
                if bb.probability <= _ZERO:
                    continue
                report = evaluate_checks(directive, [bc.outcome], [ba.outcome], [bb.outcome], mode)
                if report.verdict == "detected":
                    total += bc.probability * ba.probability * bb.probability
    if home_outcome is not None:
        return total / norm if norm > _ZERO else 0.0
    return total


def round_detection_probability(
    kind: str, mode: str, p: float, d: float, y: float | None = None
) -> float:
    """Exact per-round detection probability for an attack under one checker.

    Branch enumeration over Eve's outcome (if any), the detection draw
    (weight d), the basis draw (Z with weight p), and all measurement
    outcomes.  No sampling is involved.
    """
    _check_unit("p", p)
    _check_unit("d", d)
    detect = 0.0
    for weight, state in _attacked_round_branches(kind, y):
        vz = _violation_probability(state, Basis.Z, mode) if p > 0 else 0.0
        vx = _violation_probability(state, Basis.X, mode) if p < 1 else 0.0
        detect += weight * (p * vz + (1.0 - p) * vx)
    return d * detect


def sequence_success_probability(
    kind: str, mode: str, p: float, d: float, n: int, y: float | None = None
) -> float:
    """(1 - per-round detection)^n from the enumeration oracle.

    Rounds are independent, so this is the exact probability that an
    n-round attacked sequence escapes the checker.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return (1.0 - round_detection_probability(kind, mode, p, d, y)) ** n


def isra_round_detection(y: float, p: float, d: float, mode: str = "paper_analytic") -> float:
    """Enumerated per-round detection rate of the store-resend attack."""
    return round_detection_probability("isra", mode, p, d, y)


def imra_round_detection(p: float, d: float, mode: str = "paper_analytic") -> float:
    """Enumerated per-round detection rate of the measure-resend attack.

    Under the analytic (Z-rules-only) checker this is exactly 0: both of
    Eve's resend branches satisfy the Z correlation rules, so the attack is
    invisible there and only the strict X rule ever catches it.
    """
    return round_detection_probability("imra", mode, p, d)


def ema_round_detection(p: float, d: float, mode: str = "paper_analytic") -> float:
    """Enumerated per-round detection rate of the entangle-measure attack.

    Zero under the analytic checker (the attack leaves Z statistics
    untouched); positive under the strict checker via the X rule.
    """
    return round_detection_probability("ema", mode, p, d)


def x_round_detection_given_home0(kind: str, y: float | None = None) -> float:
    """P(strict X rule violated | X directive, home outcome 0) for an attack.

    Enumerated, not assumed.  Comes out exactly 1/2 for all three attacks —
    for the store-resend case independent of (x, y).
    """
    branches = _attacked_round_branches(kind, y)
    total_weight = 0.0
    total = 0.0
    for weight, state in branches:
        p0 = sum(
            b.probability for b in enumerate_qubit(state, "c", Basis.Z) if b.outcome == 0
        )
        if p0 <= _ZERO:
            continue
        total += weight * p0 * _violation_probability(state, Basis.X, "strict", home_outcome=0)
        total_weight += weight * p0
    return total / total_weight if total_weight > _ZERO else 0.0
