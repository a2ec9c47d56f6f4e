"""Sound provability backends with budgeted proof search.

``CERT`` accepts closure certificates and re-executes every claim they make;
see ``docs/cert-format.md`` for the bit layout.  ``EMPTY`` proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitcodec import BitString, lex_words, to_int
from .folang import (
    BEGINS_WITH_1,
    BIT_J_IS_1,
    SIGMA1_REF,
    SentencePhiW,
    StepBudgetExceeded,
    Template,
    eval_phi,
    phi_w_truth,
    words_with_prefix,
)

TAG_BEGINS = "00"
TAG_BIT_J = "01"
TAG_EXHAUST = "10"
J_WIDTH = 3
B_WIDTH = 4


@dataclass(frozen=True)
class Proof:
    payload: BitString

    @property
    def size(self) -> int:
        return len(self.payload)


class TheoryBackend:
    name = "abstract"

    def check(self, s: SentencePhiW, payload: BitString) -> tuple[bool, int]:
        """Return ``(accepted, counted_steps)``."""
        raise NotImplementedError

    def verify(self, s: SentencePhiW, p: Proof | BitString) -> bool:
        payload = p.payload if isinstance(p, Proof) else p
        return self.check(s, payload)[0]

    def proof_lengths(self) -> frozenset[int] | None:
        """Payload lengths at which a well-formed proof can exist (``None``: any)."""
        return None

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.name == other.name

    def __hash__(self) -> int:
        return hash((type(self), self.name))


class EmptyBackend(TheoryBackend):
    name = "EMPTY"

    def check(self, s, payload):
        return False, 1

    def proof_lengths(self):
        return frozenset()


class CertBackend(TheoryBackend):
    """Reference backend whose proofs are re-executable closure certificates."""

    name = "CERT"

    def proof_lengths(self):
        return frozenset({2, 2 + J_WIDTH, 2 + B_WIDTH})

    def check(self, s, payload):
        try:
            return self._check(s, payload)
        except (StepBudgetExceeded, ValueError, AttributeError, TypeError):
            return False, len(payload) + 1

    def _check(self, s: SentencePhiW, payload: BitString) -> tuple[bool, int]:
        steps = len(payload) + 1
        phi, w = s.phi, s.w
        if not isinstance(phi, Template) or not w or len(payload) < 2:
            return False, steps
        tag, body = payload[:2], payload[2:]
        if tag == TAG_BEGINS:
            ok = not body and phi.kind == BEGINS_WITH_1 and w[0] == "0"
            return ok, steps + 1
        if tag == TAG_BIT_J:
            if len(body) != J_WIDTH or phi.kind != BIT_J_IS_1:
                return False, steps
            j = to_int(body)
            ok = j == phi.param and len(w) > j and w[j] == "0"
            return ok, steps + J_WIDTH + 1
        if tag == TAG_EXHAUST:
            if len(body) != B_WIDTH or phi.kind != SIGMA1_REF:
                return False, steps
            bound = to_int(body)
            if bound < len(w) or bound < phi.verifier.stabilization_length():
                return False, steps + B_WIDTH
            for length in range(len(w), bound + 1):
                for x in words_with_prefix(w, length):
                    steps += 1
                    if eval_phi(phi, x):
                        return False, steps
            return True, steps
        return False, steps


_BACKENDS = {"CERT": CertBackend, "EMPTY": EmptyBackend}


def get_backend(name: str) -> TheoryBackend:
    try:
        return _BACKENDS[name.upper()]()
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(_BACKENDS)}") from None


def search_proof_counted(
    backend: TheoryBackend, s: SentencePhiW, size_bound: int
) -> tuple[Proof | None, int]:
    """Length-then-lex sweep of payloads up to ``size_bound`` bits.

    Lengths at which the backend cannot have a well-formed proof are skipped;
    every payload of such a length would be rejected, so the first accepted
    payload is the same as in the unpruned sweep.
    """
    if size_bound < 0:
        raise ValueError("size bound must be non-negative")
    allowed = backend.proof_lengths()
    steps = 0
    for length in range(size_bound + 1):
        if allowed is not None and length not in allowed:
            continue
        for payload in lex_words(length):
            ok, cost = backend.check(s, payload)
            steps += cost
            if ok:
                return Proof(payload), steps
    return None, steps


def search_proof(backend: TheoryBackend, s: SentencePhiW, size_bound: int) -> Proof | None:
    return search_proof_counted(backend, s, size_bound)[0]


@dataclass
class AuditReport:
    checked: int = 0
    proofs: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"checked": self.checked, "proofs": self.proofs,
                "violations": self.violations, "ok": self.ok}


def soundness_audit(
    backend: TheoryBackend, samples, size_bound: int, horizon: int = 16
) -> AuditReport:
    """Flag every sample that is proved although its sentence is false."""
    report = AuditReport()
    for s in samples:
        report.checked += 1
        proof = search_proof(backend, s, size_bound)
        if proof is None:
            continue
        report.proofs += 1
        if not backend.verify(s, proof):
            report.violations.append({"sentence": str(s), "reason": "proof does not re-verify"})
            continue
        verdict = phi_w_truth(s, max(horizon, len(s.w)))
        if verdict.is_false:
            report.violations.append(
                {"sentence": str(s), "proof": proof.payload, "verdict": verdict.value}
            )
    return report


def cert_begins() -> BitString:
    return TAG_BEGINS


def cert_bit_j(j: int) -> BitString:
    return TAG_BIT_J + format(j, f"0{J_WIDTH}b")


def cert_exhaust(bound: int) -> BitString:
    return TAG_EXHAUST + format(bound, f"0{B_WIDTH}b")
