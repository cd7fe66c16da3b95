"""Tower-function arithmetic and translation of certified witnesses into
Ramsey / Erdős–Rogers bound statements.

Machine-verified facts (certificates) and trusted literature results are
never mixed silently: every statement carries an ordered provenance chain
whose entries are either certificate references or explicitly labeled
external assertions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .hypergraphs import Certificate

DEFAULT_DIGIT_CAP = 10**6

EXTERNAL_RECURSION = "asserted-external:level-recursion"
EXTERNAL_TOWER = "asserted-external:double-exponential-corollary"


class OverflowCapError(OverflowError):
    """The exact value would exceed the configured decimal-digit cap."""


def _pow2_capped(exponent: int, digit_cap: int) -> int:
    # digits of 2^e is floor(e*log10(2)) + 1; 10/33 < log10(2) < 1/3
    if exponent * 3 > digit_cap * 10:
        raise OverflowCapError(
            f"2^{exponent} needs ~{exponent * 30103 // 100000 + 1} digits; cap is {digit_cap}"
        )
    return 1 << exponent


def twr(i: int, x: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> int:
    """Iterated exponential: twr(1, x) = x, twr(i+1, x) = 2^twr(i, x)."""
    if i < 1:
        raise ValueError("tower height must be >= 1")
    v = int(x)
    for _ in range(i - 1):
        v = _pow2_capped(v, digit_cap)
    return v


@dataclass(frozen=True)
class BoundStatement:
    """kind: ErUpper | ErLower | RamseyLower.  params hold k, s, the
    independence-pattern descriptor, and N or n as applicable."""

    kind: str
    params: dict
    value: int
    provenance: tuple

    def __post_init__(self) -> None:
        if self.kind not in ("ErUpper", "ErLower", "RamseyLower"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not self.provenance:
            raise ValueError("a bound statement needs a provenance chain")
        for entry in self.provenance:
            ok = isinstance(entry, str) and entry.startswith("asserted-external:")
            ok = ok or (isinstance(entry, dict) and "certificate" in entry)
            if not ok:
                raise ValueError(f"unlabeled provenance entry {entry!r}")

    def to_json(self) -> str:
        doc = {
            "format": 1,
            "kind": self.kind,
            "params": self.params,
            "value": self.value,
            "provenance": list(self.provenance),
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "BoundStatement":
        doc = json.loads(text)
        return BoundStatement(
            doc["kind"], doc["params"], doc["value"], tuple(
                e if isinstance(e, str) else dict(e) for e in doc["provenance"]
            )
        )


def _cert_provenance_entry(cert: Certificate) -> dict:
    return {
        "certificate": {
            "kind": cert.kind,
            "k": cert.k,
            "s_or_t": cert.s_or_t,
            "N": cert.N,
            "m": cert.m,
            "family": cert.family,
            "provenance": cert.provenance,
        }
    }


def er_upper_from_certificate(cert: Certificate) -> BoundStatement:
    """ErUpper statement carried by an ErUpperBound certificate."""
    if cert.kind != "ErUpperBound":
        raise ValueError(f"need an ErUpperBound certificate, got {cert.kind}")
    return BoundStatement(
        kind="ErUpper",
        params={
            "k": cert.k,
            "s": cert.s_or_t["s"],
            "F": _pattern_descriptor(cert),
            "N": cert.N,
        },
        value=cert.m - 1,
        provenance=(_cert_provenance_entry(cert),),
    )


def _pattern_descriptor(cert: Certificate) -> str:
    t = cert.s_or_t["t"]
    if cert.family == "clique":
        return f"K{t}"
    return f"H{t}^{cert.k}"


def ramsey_lower_from_witness(cert: Certificate, n: int) -> BoundStatement:
    """From a witness certifying a K_s-free graph on N vertices whose
    plain-independence number is < n: the (s, n) Ramsey number exceeds N.

    Accepts clique-family certificates with t = k, or pattern-family ones
    with t = 1 (a single-edge pattern copy needs k+1 vertices, so a set free
    of it spans no edge once it has > k vertices)."""
    if cert.kind != "ErUpperBound":
        raise ValueError(f"need an ErUpperBound certificate, got {cert.kind}")
    t = cert.s_or_t["t"]
    if cert.family == "clique" and t != cert.k:
        raise ValueError(f"clique-family certificate must have t=k, got t={t}")
    if cert.family == "pattern" and t != 1:
        raise ValueError(f"pattern-family certificate must have t=1, got t={t}")
    if n < cert.m:
        raise ValueError(
            f"certificate only bounds independence below {cert.m}; "
            f"need n >= {cert.m}, got n={n}"
        )
    return BoundStatement(
        kind="RamseyLower",
        params={"k": cert.k, "s": cert.s_or_t["s"], "n": n, "N": cert.N},
        value=cert.N,
        provenance=(_cert_provenance_entry(cert),),
    )


def log2_floor_root(N: int, k: int) -> int:
    """Largest M >= 0 with M^(k-1) <= log2(N), decided by exact integer
    comparison 2^(M^(k-1)) <= N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    M = 0
    while True:
        e = (M + 1) ** (k - 1)
        if e > N.bit_length() or (1 << e) > N:
            return M
        M += 1


def recursion_bound(k: int, t: int, s: int, N: int, known: BoundStatement) -> BoundStatement:
    """Lift a level-(k-1) lower bound through the level-recursion identity:
    a bound for parameters (t-1, s-1) at ground size floor(log2(N)^(1/(k-1)))
    transfers to (t, s) at N.  Purely arithmetic; provenance gains an
    external-assertion link."""
    if known.kind != "ErLower":
        raise ValueError(f"need an ErLower statement, got {known.kind}")
    M = log2_floor_root(N, k)
    p = known.params
    if p.get("k") != k - 1 or p.get("t") != t - 1 or p.get("s") != s - 1:
        raise ValueError(
            f"known statement is for (k={p.get('k')}, t={p.get('t')}, s={p.get('s')}); "
            f"need (k={k - 1}, t={t - 1}, s={s - 1})"
        )
    if p.get("N") != M:
        raise ValueError(
            f"known statement applies at ground size {p.get('N')}; "
            f"the recursion needs floor(log2({N})^(1/{k - 1})) = {M}"
        )
    return BoundStatement(
        kind="ErLower",
        params={"k": k, "t": t, "s": s, "N": N},
        value=known.value,
        provenance=known.provenance + (EXTERNAL_RECURSION,),
    )


def external_er_lower(k: int, t: int, s: int, N: int, value: int) -> BoundStatement:
    """A trusted literature lower bound, labeled as such."""
    return BoundStatement(
        kind="ErLower",
        params={"k": k, "t": t, "s": s, "N": N},
        value=value,
        provenance=("asserted-external:stated-input",),
    )


def floor_scaled_sqrt(c: Fraction, n: int) -> int:
    """floor(c * sqrt(n)) exactly: isqrt(p^2 n) // q for c = p/q."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return isqrt(c.numerator * c.numerator * n) // c.denominator


def corollary_arithmetic(c, n: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> int:
    """2^(2^floor(c*sqrt(n))) exactly, for rational c > 0 and n >= 5."""
    if n < 5:
        raise ValueError("n must be >= 5")
    e = floor_scaled_sqrt(Fraction(c), n)
    return _pow2_capped(_pow2_capped(e, digit_cap), digit_cap)


def ramsey_tower_statement(c, n: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> BoundStatement:
    """The double-exponential Ramsey lower bound at (6, n), as an explicitly
    external-labeled statement (the constant c is an input, never claimed)."""
    value = corollary_arithmetic(c, n, digit_cap)
    return BoundStatement(
        kind="RamseyLower",
        params={"k": 4, "s": 6, "n": n, "N": value, "c": str(Fraction(c))},
        value=value,
        provenance=(EXTERNAL_TOWER,),
    )
