"""Dense truncations of infinite-matrix operators between sequence spaces.

Dense N x N storage throughout: the factorization checks are O(N^2) scans and
the workloads stay at desk scale, so sparsity machinery would buy nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ParseError, SizeMismatch, SpecError
from .exponents import Exponent, TWO
from .seq_spaces import (
    IndexDomain,
    SeqSpaceSpec,
    SpaceKind,
    TruncatedSeq,
    lp_space,
    space_norm,
)


@dataclass(frozen=True)
class MatrixOp:
    """N x N truncation of an infinite matrix operator.

    Column j holds the image of the j-th unit vector, so ``entries[i, j]``
    is the i-th coordinate of T(e^j).
    """

    entries: np.ndarray
    domain: SeqSpaceSpec
    codomain: SeqSpaceSpec

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise SizeMismatch(f"matrix must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise SpecError("matrix entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[float(v) for v in row] for row in self.entries],
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixOp":
        return cls(
            np.asarray(obj["entries"], dtype=float),
            SeqSpaceSpec.from_json(obj["domain"]),
            SeqSpaceSpec.from_json(obj["codomain"]),
        )


def cesaro_matrix(n: int, r: Exponent = TWO) -> MatrixOp:
    """Running-averages operator: entry (i, j) is 1/i for j <= i, else 0."""
    if n < 1:
        raise SpecError("matrix size must be >= 1")
    i = np.arange(1, n + 1, dtype=float)[:, None]
    j = np.arange(1, n + 1, dtype=float)[None, :]
    entries = np.where(j <= i, 1.0 / i, 0.0)
    spec = lp_space(r)
    return MatrixOp(entries, spec, spec)


def identity_matrix(n: int, p: Exponent = TWO, q: Exponent | None = None) -> MatrixOp:
    return MatrixOp(np.eye(n), lp_space(p), lp_space(q if q is not None else p))


def random_lower_triangular(n: int, seed: int, p: Exponent = TWO) -> MatrixOp:
    rng = np.random.default_rng(seed)
    entries = np.tril(rng.standard_normal((n, n)))
    spec = lp_space(p)
    return MatrixOp(entries, spec, spec)


def factorable_matrix(alpha: TruncatedSeq, h: TruncatedSeq, j0: int = 1,
                      domain: SeqSpaceSpec | None = None,
                      codomain: SeqSpaceSpec | None = None) -> MatrixOp:
    """Matrix with the rank-one-scaled triangular shape that factors through
    the running-averages operator: entry (i, j) = h_j * alpha_{i-j0+1} on the
    shifted triangle j0 <= j <= i, zero elsewhere.
    """
    a, hv = alpha.coeffs, h.coeffs
    n = hv.size
    if j0 < 1 or j0 > n:
        raise SpecError(f"shift j0={j0} outside 1..{n}")
    entries = np.zeros((n, n))
    for i in range(j0, n + 1):
        entries[i - 1, j0 - 1:i] = hv[j0 - 1:i] * a[i - j0]
    return MatrixOp(entries, domain or lp_space(TWO), codomain or lp_space(TWO))


def perturb_entry(op: MatrixOp, i: int, j: int, eps: float) -> MatrixOp:
    """Copy of op with eps added at 1-based entry (i, j)."""
    if not (1 <= i <= op.n and 1 <= j <= op.n):
        raise SpecError(f"entry ({i}, {j}) outside 1..{op.n}")
    entries = op.entries.copy()
    entries[i - 1, j - 1] += eps
    return MatrixOp(entries, op.domain, op.codomain)


def apply(op: MatrixOp, x: TruncatedSeq) -> TruncatedSeq:
    """Matrix-vector product as a NAT1 sequence."""
    if len(x) != op.n:
        raise LengthMismatch(f"vector length {len(x)} != matrix size {op.n}")
    return TruncatedSeq(op.entries @ x.coeffs, IndexDomain.NAT1)


def diagonal_sandwich(g: TruncatedSeq, op: MatrixOp, h: TruncatedSeq) -> MatrixOp:
    """Matrix of M_g . S . M_h: entries g_i * s_ij * h_j."""
    if len(g) != op.n or len(h) != op.n:
        raise LengthMismatch("multiplier lengths must equal the matrix size")
    entries = g.coeffs[:, None] * op.entries * h.coeffs[None, :]
    return MatrixOp(entries, op.domain, op.codomain)


def operator_norm_estimate(op: MatrixOp, trials: int = 64, seed: int = 0) -> float:
    """Certified lower bound on the operator norm of the truncation.

    Sampling: coordinate vectors (exact column norms), seeded random
    directions normalized in the domain norm, and power-iteration refinement
    when domain and codomain are both plain l^2 (where the refined value is
    the spectral norm itself up to iteration tolerance).  No upper-bound
    claim is made outside the l^2 case.  Deterministic given the seed.
    """
    if trials < 1:
        raise SpecError("trials must be >= 1")
    a = op.entries
    n = op.n
    best = 0.0
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        dn = space_norm(TruncatedSeq(e), op.domain)
        if dn > 0:
            best = max(best, space_norm(TruncatedSeq(a[:, j]), op.codomain) / dn)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = rng.standard_normal(n)
        dn = space_norm(TruncatedSeq(x), op.domain)
        if dn == 0:
            continue
        best = max(best, space_norm(TruncatedSeq(a @ x), op.codomain) / dn)
    both_l2 = (
        op.domain.kind is SpaceKind.LP and op.codomain.kind is SpaceKind.LP
        and op.domain.p == TWO and op.codomain.p == TWO
    )
    if both_l2:
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        prev = 0.0
        for _ in range(10000):
            y = a @ x
            z = a.T @ y
            val = np.linalg.norm(z)
            if val == 0.0:
                break
            x = z / val
            sigma = np.sqrt(val)
            if abs(sigma - prev) <= 1e-14 * max(sigma, 1.0):
                prev = sigma
                break
            prev = sigma
        best = max(best, prev)
    return best


# ---------------------------------------------------------------------------
# ingestion / serialization

def matrix_to_csv(op: MatrixOp, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"N={op.n}\n")
        for row in op.entries:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def matrix_from_csv(path, domain: SeqSpaceSpec | None = None,
                    codomain: SeqSpaceSpec | None = None) -> MatrixOp:
    """Row-major CSV with a one-line header ``N=<n>``."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("N="):
        raise ParseError(f"{path}:1: expected header 'N=<n>'")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise ParseError(f"{path}:1: malformed size in header {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise ParseError(f"{path}: expected {n} rows, found {len(lines) - 1}")
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != n:
            raise ParseError(f"{path}:{k}: expected {n} values, found {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise ParseError(f"{path}:{k}: {exc}") from None
    spec2 = lp_space(TWO)
    return MatrixOp(np.asarray(rows), domain or spec2, codomain or spec2)


def matrix_from_json_file(path) -> MatrixOp:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from None
    try:
        return MatrixOp.from_json(obj)
    except KeyError as exc:
        raise ParseError(f"{path}: missing key {exc}") from None


def seq_to_csv(x: TruncatedSeq, path) -> None:
    with open(path, "w") as fh:
        for v in x.coeffs:
            fh.write(repr(float(v)) + "\n")


def seq_from_csv(path, index_domain: IndexDomain = IndexDomain.NAT1) -> TruncatedSeq:
    """Single-column CSV of coefficients."""
    values = []
    with open(path) as fh:
        for k, ln in enumerate(fh, start=1):
            ln = ln.strip()
            if not ln:
                continue
            try:
                values.append(float(ln))
            except ValueError:
                raise ParseError(f"{path}:{k}: not a number: {ln!r}") from None
    if not values:
        raise ParseError(f"{path}: empty sequence")
    return TruncatedSeq(np.asarray(values), index_domain)
