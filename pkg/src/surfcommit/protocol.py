"""Commit/Reveal with deterministic transcripts and canonical text formats.

Opening randomness layout::

    len(curve_bytes) as 2 bytes big-endian || curve_bytes || seed || counter (4 bytes)

``curve_bytes`` fill the randomness slots of the curve, ``seed || counter``
drives the choice of surface in the solution space.  Commit starts at the
counter found in the randomness and increments it after every draw that
fails smoothness certification, so the opening it returns reproduces the
commitment on the first draw.
"""

from __future__ import annotations

import functools
import hashlib
import re
from dataclasses import dataclass, field
from math import comb

from surfcommit.algebra.field import GF, Field, prime_power
from surfcommit.curve import RationalCurve, SchemeParams, encode_message, slot_bytes_for
from surfcommit.errors import (
    CapacityExceeded,
    CommitFailed,
    InsufficientData,
    ParseError,
    SurfCommitError,
    ValidationError,
)
from surfcommit.picard import WeilData, count_points, picard_gate, uniqueness_criterion, weil_reconstruct_both
from surfcommit.surface import (
    Surface,
    containment_system,
    field_stream,
    nullspace,
    parse_elements,
    parse_header,
    sample_surface,
    smoothness_certify,
)

BRUTE_FORCE_THRESHOLD = 2**64
RETRY_BUDGET = 64
COUNTER_BYTES = 4


# -- parameter validation -----------------------------------------------------------


@dataclass
class Check:
    name: str
    status: str  # ok | warn | fail
    detail: str


@dataclass
class ParamsReport:
    q: int
    d: int
    m: int
    checks: list[Check] = field(default_factory=list)
    criterion: str = "not_applicable"
    fatal: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.fatal and all(c.status != "fail" for c in self.checks)

    def warnings(self) -> list[Check]:
        return [c for c in self.checks if c.status == "warn"]

    def lines(self) -> list[str]:
        out = [f"q={self.q}", f"d={self.d}", f"m={self.m}", f"criterion={self.criterion}"]
        out += [f"check.{c.name}={c.status} ({c.detail})" for c in self.checks]
        out += [f"fatal={f}" for f in self.fatal]
        out.append(f"result={'pass' if self.passed else 'fail'}")
        return out


def params_validate(q: int, d: int, m: int, brute_force_threshold: int = BRUTE_FORCE_THRESHOLD) -> ParamsReport:
    rep = ParamsReport(q, d, m)
    try:
        p, _ = prime_power(q)
    except SurfCommitError as exc:
        rep.fatal.append(f"q={q} is not a prime power: {exc}")
        return rep
    if d < 1 or m < 1:
        rep.fatal.append("d and m must be positive")
        return rep
    if d > 3:
        rep.checks.append(Check("degree", "ok", f"d={d} > 3"))
        crit = uniqueness_criterion(d, m)
        rep.criterion = crit.verdict
        rep.checks.append(Check("criterion", "ok" if crit.holds else "fail", crit.justification))
    else:
        rep.checks.append(Check("degree", "fail", f"d={d} <= 3: uniqueness is not guaranteed"))
    if d % 2:
        rep.checks.append(Check("parity", "warn", "d odd: the Picard-two verification cannot succeed"))
    else:
        rep.checks.append(Check("parity", "ok", "d even"))
    if d % p == 0:
        rep.checks.append(Check("characteristic", "warn", f"p={p} divides d: partials alone do not cut out the singular locus"))
    else:
        rep.checks.append(Check("characteristic", "ok", f"p={p} does not divide d"))
    space = q ** (4 * (m + 1))
    if space < brute_force_threshold:
        rep.checks.append(Check("brute_force", "warn", f"q^(4(m+1)) = {space} is below {brute_force_threshold}: exhaustive search is feasible"))
    else:
        rep.checks.append(Check("brute_force", "ok", f"q^(4(m+1)) = 2^{space.bit_length() - 1}+"))
    dim = comb(d + 3, 3) - (d * m + 1)
    if dim > 0:
        rep.checks.append(Check("nullspace", "ok", f"C(d+3,3) - (dm+1) = {dim}"))
    else:
        rep.checks.append(Check("nullspace", "fail", f"C(d+3,3) - (dm+1) = {dim}: no surface need exist"))
        rep.fatal.append("containment system is not underdetermined")
    return rep


# -- randomness framing ------------------------------------------------------------


def pack_randomness(curve_bytes: bytes, seed: bytes, counter: int = 0) -> bytes:
    if len(curve_bytes) >= 2**16:
        raise ValidationError("curve randomness longer than 65535 bytes")
    if not 0 <= counter < 2 ** (8 * COUNTER_BYTES):
        raise ValidationError("retry counter out of range")
    return len(curve_bytes).to_bytes(2, "big") + curve_bytes + seed + counter.to_bytes(COUNTER_BYTES, "big")


def unpack_randomness(data: bytes) -> tuple[bytes, bytes, int]:
    if len(data) < 2 + COUNTER_BYTES:
        raise ValidationError("randomness too short for its framing")
    n = int.from_bytes(data[:2], "big")
    if 2 + n + COUNTER_BYTES > len(data):
        raise ValidationError("curve randomness length exceeds the randomness string")
    curve = data[2 : 2 + n]
    seed = data[2 + n : -COUNTER_BYTES]
    counter = int.from_bytes(data[-COUNTER_BYTES:], "big")
    return curve, seed, counter


def _draw_seed(seed: bytes, counter: int) -> bytes:
    return seed + counter.to_bytes(COUNTER_BYTES, "big")


# -- data types ---------------------------------------------------------------------


def _slots_text(slots) -> str:
    return ",".join(map(str, slots)) if slots else "-"


def _parse_slots(text: str, lineno: int) -> tuple[int, ...]:
    if text == "-":
        return ()
    if not re.fullmatch(r"(0|[1-9]\d*)(,(0|[1-9]\d*))*", text):
        raise ParseError(f"malformed slot list {text!r}", lineno, 1)
    return tuple(int(x) for x in text.split(","))


def _expect(line: str, prefix: str, lineno: int) -> str:
    if not line.startswith(prefix):
        raise ParseError(f"expected {prefix!r}", lineno, 1)
    return line[len(prefix) :]


@dataclass(frozen=True)
class Commitment:
    surface: Surface
    params: SchemeParams
    certificate: str = ""
    picard: str = "skipped"

    def serialize(self) -> str:
        p = self.params
        return (
            self.surface.serialize()
            + f"m={p.m}\n"
            + f"message_slots={_slots_text(p.message_slots)}\n"
            + f"certificate={self.certificate or '-'}\n"
            + f"picard={self.picard}\n"
        )

    @classmethod
    def deserialize(cls, data) -> "Commitment":
        text = _text(data)
        lines = text.split("\n")
        if len(lines) != 7 or lines[-1] != "":
            raise ParseError("commitment must have exactly six lines", min(len(lines), 7))
        surface = Surface.deserialize("\n".join(lines[:2]) + "\n")
        m_txt = _expect(lines[2], "m=", 3)
        if not re.fullmatch(r"[1-9]\d*", m_txt):
            raise ParseError("malformed m", 3, 3)
        m = int(m_txt)
        msg = _parse_slots(_expect(lines[3], "message_slots=", 4), 4)
        n = 4 * (m + 1)
        if any(s >= n for s in msg):
            raise ValidationError(f"slot index beyond {n - 1}")
        rand = tuple(i for i in range(n) if i not in set(msg))
        params = SchemeParams(surface.field, surface.d, m, msg, rand)
        cert = _expect(lines[4], "certificate=", 5)
        if cert != "-" and not re.fullmatch(r"[0-9a-f]{64}", cert):
            raise ParseError("certificate must be a lowercase sha256 hex digest or '-'", 5, 13)
        picard = _expect(lines[5], "picard=", 6)
        if not re.fullmatch(r"[a-z_]+", picard):
            raise ParseError("malformed picard field", 6, 8)
        out = cls(surface, params, "" if cert == "-" else cert, picard)
        if out.serialize() != text:
            raise ParseError("commitment text is not canonical", 1)
        return out


@dataclass(frozen=True)
class Opening:
    field: Field
    d: int
    m: int
    curve: RationalCurve
    message: bytes
    randomness: bytes

    def serialize(self) -> str:
        F = self.field
        lines = [f"q={F.label} {self.d} {self.m}"]
        for g in self.curve.f:
            lines.append(" ".join(F.element(g.coeff(j)).serialize() for j in range(self.m + 1)))
        lines.append(self.message.hex())
        lines.append(self.randomness.hex())
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, data) -> "Opening":
        text = _text(data)
        lines = text.split("\n")
        if len(lines) != 8 or lines[-1] != "":
            raise ParseError("opening must have exactly seven lines", min(len(lines), 8))
        field, (d, m) = parse_header(lines[0], 1, 2)
        coeffs = [parse_elements(field, lines[1 + i], 2 + i, m + 1) for i in range(4)]
        curve = RationalCurve.from_ints(field, coeffs, m)
        blobs = []
        for lineno in (6, 7):
            h = lines[lineno - 1]
            if not re.fullmatch(r"([0-9a-f]{2})*", h):
                raise ParseError("expected lowercase hex", lineno, 1)
            blobs.append(bytes.fromhex(h))
        out = cls(field, d, m, curve, blobs[0], blobs[1])
        if out.serialize() != text:
            raise ParseError("opening text is not canonical", 1)
        return out


def _text(data) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"non-ASCII byte at offset {exc.start}", 1, exc.start + 1) from exc
    return data


# -- commit / reveal ----------------------------------------------------------------


@dataclass
class CommitTranscript:
    commitment: Commitment
    opening: Opening
    attempts: int
    failures: list[str]


def _surface_for(curve: RationalCurve, params: SchemeParams):
    return nullspace(containment_system(curve, params.d, validate=False))


def commit(
    message: bytes,
    randomness: bytes,
    params: SchemeParams,
    retry_budget: int = RETRY_BUDGET,
    run_picard: bool = False,
    workers: int = 1,
) -> tuple[Commitment, Opening]:
    t = commit_transcript(message, randomness, params, retry_budget, run_picard, workers)
    return t.commitment, t.opening


def commit_transcript(message, randomness, params, retry_budget=RETRY_BUDGET, run_picard=False, workers=1) -> CommitTranscript:
    curve_bytes, seed, counter0 = unpack_randomness(randomness)
    curve = encode_message(message, curve_bytes, params)
    space = _surface_for(curve, params)
    failures = []
    for counter in range(counter0, min(counter0 + retry_budget, 2 ** (8 * COUNTER_BYTES))):
        S = sample_surface(space, _draw_seed(seed, counter))
        cert = smoothness_certify(S, scan_ext=0, workers=workers)
        if not cert.smooth:
            failures.append(f"counter={counter}: {cert.status}: {cert.detail}")
            continue
        picard = _picard_status(S, workers) if run_picard else "skipped"
        com = Commitment(S, params, cert.digest(), picard)
        opening = Opening(params.field, params.d, params.m, curve, message, pack_randomness(curve_bytes, seed, counter))
        return CommitTranscript(com, opening, counter - counter0 + 1, failures)
    raise CommitFailed(f"no smooth surface after {retry_budget} draws", failures)


def _picard_status(S: Surface, workers: int) -> str:
    """Run the point-count gate with whatever extensions fit the enumeration cap."""
    counts = []
    i = 1
    while True:
        try:
            counts.append(count_points(S, i, workers))
        except CapacityExceeded:
            break
        i += 1
    data = WeilData(S.field.q, S.d, counts)
    try:
        cands = weil_reconstruct_both(data)
    except InsufficientData:
        return "inconclusive"
    return picard_gate(cands, S.d).verdict


@dataclass(frozen=True)
class RevealResult:
    accepted: bool
    reason: str

    def __bool__(self):
        return self.accepted


@functools.lru_cache(maxsize=64)
def _recompute(message: bytes, randomness: bytes, params: SchemeParams):
    """Deterministic (curve, surface, serialized surface) for an opening; memoized."""
    curve_bytes, seed, counter = unpack_randomness(randomness)
    expected = encode_message(message, curve_bytes, params)
    S = sample_surface(_surface_for(expected, params), _draw_seed(seed, counter))
    return expected, S, S.serialize()


def reveal(message: bytes, randomness: bytes, commitment: Commitment, curve: RationalCurve | None = None) -> RevealResult:
    """Recompute the commitment from (message, randomness) and compare bit-exactly."""
    try:
        expected, S, text = _recompute(bytes(message), bytes(randomness), commitment.params)
    except SurfCommitError as exc:
        return RevealResult(False, f"opening does not encode a valid curve: {exc}")
    if curve is not None and curve != expected:
        return RevealResult(False, "opening curve differs from the encoding of (message, randomness)")
    if text != commitment.surface.serialize():
        return RevealResult(False, "recomputed surface differs from the commitment")
    if not commitment.surface.F.substitute(expected.f).is_zero():
        return RevealResult(False, "curve does not lie on the committed surface")
    cert = smoothness_certify(S, scan_ext=0)
    if not cert.smooth:
        return RevealResult(False, "committed surface is not certified smooth")
    if commitment.certificate and cert.digest() != commitment.certificate:
        return RevealResult(False, "smoothness certificate digest mismatch")
    return RevealResult(True, "recomputed commitment matches")


def reveal_opening(opening, commitment) -> RevealResult:
    """Reveal from serialized or parsed opening and commitment."""
    try:
        if not isinstance(opening, Opening):
            opening = Opening.deserialize(opening)
        if not isinstance(commitment, Commitment):
            commitment = Commitment.deserialize(commitment)
    except SurfCommitError as exc:
        return RevealResult(False, f"malformed input: {exc}")
    p = commitment.params
    if (opening.field, opening.d, opening.m) != (p.field, p.d, p.m):
        return RevealResult(False, "opening parameters differ from the commitment")
    return reveal(opening.message, opening.randomness, commitment, opening.curve)


def make_params(q: int, d: int, m: int, split: str = "default") -> SchemeParams:
    p, k = prime_power(q)
    F = GF(p, k)
    if split == "default":
        return SchemeParams.default(F, d, m)
    if split == "all-randomness":
        return SchemeParams.all_randomness(F, d, m)
    raise ValidationError(f"unknown slot split {split!r}")


def derive_randomness(params: SchemeParams, label: bytes, seed_len: int = 16) -> bytes:
    """Deterministic framed randomness with uniformly chosen curve-slot digits."""
    digits = field_stream(b"curve|" + label, params.field.q, len(params.randomness_slots))
    seed = hashlib.shake_256(b"seed|" + label).digest(seed_len)
    return pack_randomness(slot_bytes_for(digits, params.field.q), seed, 0)


def derive_message(params: SchemeParams, label: bytes) -> bytes:
    digits = field_stream(b"message|" + label, params.field.q, len(params.message_slots))
    return slot_bytes_for(digits, params.field.q)
