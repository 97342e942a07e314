"""The supervised entanglement-sharing protocol proper.

One run goes through two phases:

* **Distribution and detection.**  Charlie prepares ``n`` W-state triples,
  keeps the home qubit ``c`` of each and sends ``a`` to Alice and ``b`` to
  Bob (an attack, if active, tampers with ``b`` in flight).  Each position
  is then independently sacrificed for detection with probability ``d``;
  for a sacrificed position Charlie Z-measures his home qubit and directs
  Alice and Bob to measure their travel qubits in a random common basis
  (Z with probability ``p``, else X).  The published results are fed to a
  checking algorithm; any violated correlation rule aborts the run.
* **Confirmation.**  Charlie Z-measures the remaining home qubits and
  publishes which came out 0 — exactly those positions leave Alice and Bob
  sharing a (|01>+|10>)/sqrt(2) Bell pair, ready for teleportation.

Two checking semantics ship side by side.  ``strict`` enforces every
physically valid correlation of the W state:

====== ===== =============================
basis  home  rule for the travel results
====== ===== =============================
Z      0     Ra xor Rb = 1
Z      1     Ra = Rb = 0
X      0     Ra = Rb
X      1     (no constraint)
====== ===== =============================

``paper_analytic`` applies the same Z rules but lets every X-basis round
pass unconditionally, which is the detection model under which the
closed-form expressions in :mod:`wshare.analytic` hold exactly.  The modes
consume randomness identically, so runs with equal seeds are comparable
round for round.

Detection never yields false positives in either mode: every honest
measurement branch of the W state satisfies all four rules.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .attacks import AttackModel
from .statevec import Basis, StateVector, discard_qubit, make_w_state, measure_qubit

CHECKER_MODES = ("paper_analytic", "strict")

RULE_KEYS = ("z_rc0", "z_rc1", "x_rc0")


@dataclass(frozen=True)
class ProtocolConfig:
    """Run parameters; validated on construction."""

    n: int
    d: float
    p: float
    checker_mode: str = "paper_analytic"
    master_seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"sequence length n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.d <= 1.0:
            raise ValueError(f"detection probability d must be in [0, 1], got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Z-basis probability p must be in [0, 1], got {self.p}")
        if self.checker_mode not in CHECKER_MODES:
            raise ValueError(
                f"checker_mode must be one of {CHECKER_MODES}, got {self.checker_mode!r}"
            )
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ValueError(f"master_seed must be a non-negative integer, got {self.master_seed!r}")


@dataclass(frozen=True)
class DetectionDirective:
    """One sacrificed position and the basis Alice and Bob must use there."""

    position: int
    basis: Basis


@dataclass
class RoundState:
    """Bookkeeping for one W-triple: its register and any classical results.

    ``rc``/``ra``/``rb`` are detection-phase results (home always Z, travel
    qubits in the directive basis); ``home_bit`` is the confirmation-phase
    Z result for positions that survived detection.
    """

    index: int
    state: StateVector
    directive_basis: Basis | None = None
    rc: int | None = None
    ra: int | None = None
    rb: int | None = None
    home_bit: int | None = None

    @property
    def home_measured(self) -> bool:
        return self.rc is not None or self.home_bit is not None


@dataclass
class RuleTally:
    """How often one checking rule applied and how often it was violated."""

    applied: int = 0
    violations: int = 0


@dataclass(frozen=True)
class CheckReport:
    """Verdict of the checking algorithm plus per-rule diagnostics."""

    verdict: str  # "pass" | "detected"
    offending_rounds: tuple[int, ...]
    tallies: dict[str, RuleTally] = field(compare=False)

    def __post_init__(self) -> None:
        detected = bool(self.offending_rounds)
        if (self.verdict == "detected") != detected:
            raise ValueError("verdict must be 'detected' exactly when offending rounds exist")


@dataclass(frozen=True)
class DistilledPairSet:
    """Positions (original round indices) and collapsed states of the pairs.

    Each state is the round's register with the home qubit dropped: the
    two-qubit (a, b) Bell pair in an honest run, possibly with an attacker's
    ancilla still entangled alongside otherwise.
    """

    positions: tuple[int, ...]
    states: tuple[StateVector, ...]

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(zip(self.positions, self.states))


@dataclass(frozen=True)
class RunOutcome:
    """Everything one protocol execution produced."""

    config: ProtocolConfig
    attack_kind: str
    directives: tuple[DetectionDirective, ...]
    report: CheckReport
    pairs: DistilledPairSet
    rounds: tuple[RoundState, ...]
    transcript: tuple[tuple, ...]
    teleport_fidelities: tuple[float, ...] = ()
    eve_recovery: float | None = None

    @property
    def aborted(self) -> bool:
        return self.report.verdict == "detected"

    @property
    def surviving_count(self) -> int:
        return self.config.n - len(self.directives)

    @property
    def yield_fraction(self) -> float | None:
        """Distilled pairs per surviving position (None if nothing survived)."""
        if self.surviving_count == 0:
            return None
        return len(self.pairs) / self.surviving_count


# ---------------------------------------------------------------------------
# the protocol's individual steps


def select_detection_positions(n: int, d: float, rand: np.random.Generator) -> list[int]:
    """Pick each position 1..n independently with probability d (sorted).

    Always consumes exactly n draws so that runs with different d remain
    stream-aligned for everything that follows.
    """
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"detection probability d must be in [0, 1], got {d}")
    mask = rand.random(n) < d
    return [int(i) + 1 for i in np.flatnonzero(mask)]


def assign_bases(positions, p: float, rand: np.random.Generator) -> list[DetectionDirective]:
    """Attach a directive basis to each position: Z w.p. p, X otherwise."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Z-basis probability p must be in [0, 1], got {p}")
    draws = rand.random(len(positions))
    return [
        DetectionDirective(pos, Basis.Z if draw < p else Basis.X)
        for pos, draw in zip(positions, draws)
    ]


def evaluate_checks(directives, rc_results, ra_results, rb_results, mode: str) -> CheckReport:
    """Apply the checking rules to the published detection results.

    All four sequences must be aligned position by position.  See the module
    docstring for the rule table and the two modes.
    """
    if mode not in CHECKER_MODES:
        raise ValueError(f"unknown checker mode {mode!r}; expected one of {CHECKER_MODES}")
    if not (len(directives) == len(rc_results) == len(ra_results) == len(rb_results)):
        raise ValueError(
            "misaligned check inputs: "
            f"{len(directives)} directives vs {len(rc_results)}/{len(ra_results)}/{len(rb_results)} results"
        )
    tallies = {key: RuleTally() for key in RULE_KEYS}
    offending: list[int] = []
    for directive, rc, ra, rb in zip(directives, rc_results, ra_results, rb_results):
        if directive.basis is Basis.Z:
            if rc == 0:
                key, ok = "z_rc0", (ra ^ rb) == 1
            else:
                key, ok = "z_rc1", ra == 0 and rb == 0
        else:
            if mode != "strict" or rc != 0:
                continue  # X rounds pass unconditionally outside strict/home-0
            key, ok = "x_rc0", ra == rb
        tally = tallies[key]
        tally.applied += 1
        if not ok:
            tally.violations += 1
            offending.append(directive.position)
    verdict = "detected" if offending else "pass"
    return CheckReport(verdict, tuple(offending), tallies)


def distill_positions(home_results) -> list[int]:
    """1-based indices (into the given sequence) whose home outcome was 0."""
    return [i + 1 for i, bit in enumerate(home_results) if bit == 0]


def extract_pairs(rounds, positions) -> DistilledPairSet:
    """Collect the shared pair states at the given original round indices.

    Each position must have survived detection and have home outcome 0;
    the home qubit is dropped from the returned states.
    """
    out_positions: list[int] = []
    out_states: list[StateVector] = []
    for t in positions:
        if not 1 <= t <= len(rounds):
            raise ValueError(f"round index {t} out of range 1..{len(rounds)}")
        rs = rounds[t - 1]
        if rs.rc is not None:
            raise ValueError(f"round {t} was consumed by a detection measurement")
        if rs.home_bit is None:
            raise ValueError(f"round {t} home qubit has not been measured yet")
        if rs.home_bit != 0:
            raise ValueError(f"round {t} home outcome was 1; it holds no pair")
        out_positions.append(t)
        out_states.append(discard_qubit(rs.state, "c"))
    return DistilledPairSet(tuple(out_positions), tuple(out_states))


@functools.cache
def _w_template() -> StateVector:
    return make_w_state(("a", "b", "c"))


def run_protocol(
    config: ProtocolConfig,
    attack: AttackModel | None = None,
    rand: np.random.Generator | None = None,
) -> RunOutcome:
    """Execute one full protocol run and return its outcome.

    With ``rand`` omitted, the stream is seeded from ``config.master_seed``;
    identical (config, attack, seed) triples reproduce the outcome bit for
    bit.  On detection the run aborts (no pairs); rerunning is the caller's
    decision.
    """
    if attack is None:
        attack = AttackModel.none()
    if rand is None:
        rand = np.random.default_rng(config.master_seed)

    transcript: list[tuple] = [("charlie", "mode", "transmission")]

    # Distribution: one W triple per position, travel qubits in flight
    # (the attack, if any, grabs b here).
    w = _w_template()
    rounds = [RoundState(t, attack.intercept(w, t, rand)) for t in range(1, config.n + 1)]
    transcript.append(("charlie", "send", config.n))

    # Detection: sample positions, direct bases, measure, publish.
    transcript.append(("charlie", "mode", "detecting"))
    positions = select_detection_positions(config.n, config.d, rand)
    directives = assign_bases(positions, config.p, rand)
    transcript.append(
        ("charlie", "directives", tuple((dd.position, dd.basis.value) for dd in directives))
    )
    rc_results: list[int] = []
    ra_results: list[int] = []
    rb_results: list[int] = []
    for dd in directives:
        rs = rounds[dd.position - 1]
        rs.directive_basis = dd.basis
        branch = measure_qubit(rs.state, "c", Basis.Z, rand)
        rs.state, rs.rc = branch.post_state, branch.outcome
        branch = measure_qubit(rs.state, "a", dd.basis, rand)
        rs.state, rs.ra = branch.post_state, branch.outcome
        branch = measure_qubit(rs.state, "b", dd.basis, rand)
        rs.state, rs.rb = branch.post_state, branch.outcome
        rc_results.append(rs.rc)
        ra_results.append(rs.ra)
        rb_results.append(rs.rb)
    transcript.append(("charlie", "home-results", tuple(rc_results)))
    transcript.append(("alice", "results", tuple(ra_results)))
    transcript.append(("bob", "results", tuple(rb_results)))

    report = evaluate_checks(directives, rc_results, ra_results, rb_results, config.checker_mode)
    transcript.append(("charlie", "verdict", report.verdict))
    if report.verdict == "detected":
        transcript.append(("charlie", "offending", report.offending_rounds))
        transcript.append(("charlie", "abort", "eavesdropping suspected; sequence discarded"))
        return RunOutcome(
            config=config,
            attack_kind=attack.kind,
            directives=tuple(directives),
            report=report,
            pairs=DistilledPairSet((), ()),
            rounds=tuple(rounds),
            transcript=tuple(transcript),
        )

    # Confirmation: measure surviving home qubits, publish the 0 positions.
    transcript.append(("charlie", "mode", "confirmation"))
    sacrificed = {dd.position for dd in directives}
    surviving = [t for t in range(1, config.n + 1) if t not in sacrificed]
    home_bits: list[int] = []
    for t in surviving:
        rs = rounds[t - 1]
        branch = measure_qubit(rs.state, "c", Basis.Z, rand)
        rs.state, rs.home_bit = branch.post_state, branch.outcome
        home_bits.append(branch.outcome)
    kept = distill_positions(home_bits)
    transcript.append(("charlie", "distill-positions", tuple(kept)))
    pairs = extract_pairs(rounds, [surviving[i - 1] for i in kept])
    transcript.append(("charlie", "pair-count", len(pairs)))
    return RunOutcome(
        config=config,
        attack_kind=attack.kind,
        directives=tuple(directives),
        report=report,
        pairs=pairs,
        rounds=tuple(rounds),
        transcript=tuple(transcript),
    )
