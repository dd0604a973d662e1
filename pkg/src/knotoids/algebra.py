"""Exact algebra: multivariate Laurent polynomials over Z and sparse rank over Q.

Laurent polynomials are stored as a map from exponent vectors (one signed
integer per declared variable) to nonzero integer coefficients.  The variable
list is fixed per polynomial; arithmetic between polynomials requires equal
variable lists.  Everything is exact -- no floating point anywhere.

Rank computation is exact Gaussian elimination over Q.  Differential matrices
in this package have mostly +-1 entries, so elimination prefers +-1 pivots
(pure integer row operations, lowest index first, deterministic); only if no
unit pivot remains does it fall back to Fraction arithmetic on the leftover
submatrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


KNOWN_VARIABLES = ("t", "q", "u", "A", "B", "l", "h")


class VariableMismatchError(ValueError):
    """Raised when combining polynomials over different variable lists."""


class SubstitutionError(ValueError):
    """Raised when a substitution rule does not apply (e.g. odd u-exponent)."""


@dataclass(frozen=True)
class LaurentPoly:
    """Multivariate Laurent polynomial with integer coefficients.

    ``variables`` is the ordered tuple of variable names; ``terms`` maps
    exponent tuples (same length) to nonzero integer coefficients.
    """

    variables: tuple[str, ...]
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        for name in self.variables:
            if name not in KNOWN_VARIABLES:
                raise VariableMismatchError(f"unknown variable {name!r}")
        clean = {}
        for exp, coef in self.terms.items():
            if len(exp) != len(self.variables):
                raise VariableMismatchError(
                    f"exponent vector {exp} does not match variables {self.variables}"
                )
            if coef:
                clean[tuple(int(e) for e in exp)] = int(coef)
        object.__setattr__(self, "terms", clean)

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def zero(variables: Iterable[str]) -> "LaurentPoly":
        return LaurentPoly(tuple(variables), {})

    @staticmethod
    def constant(variables: Iterable[str], value: int) -> "LaurentPoly":
        variables = tuple(variables)
        if value == 0:
            return LaurentPoly(variables, {})
        return LaurentPoly(variables, {(0,) * len(variables): value})

    @staticmethod
    def monomial(variables: Iterable[str], exponents: Mapping[str, int],
                 coefficient: int = 1) -> "LaurentPoly":
        variables = tuple(variables)
        for name in exponents:
            if name not in variables:
                raise VariableMismatchError(
                    f"variable {name!r} not among {variables}")
        exp = tuple(int(exponents.get(v, 0)) for v in variables)
        return LaurentPoly(variables, {exp: coefficient})

    # ------------------------------------------------------------------
    # ring operations

    def _check(self, other: "LaurentPoly") -> None:
        if self.variables != other.variables:
            raise VariableMismatchError(
                f"variable lists differ: {self.variables} vs {other.variables}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        terms = dict(self.terms)
        for exp, coef in other.terms.items():
            new = terms.get(exp, 0) + coef
            if new:
                terms[exp] = new
            else:
                terms.pop(exp, None)
        return LaurentPoly(self.variables, terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.variables,
                           {exp: -coef for exp, coef in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                new = terms.get(exp, 0) + c1 * c2
                if new:
                    terms[exp] = new
                else:
                    terms.pop(exp, None)
        return LaurentPoly(self.variables, terms)

    def scale(self, value: int) -> "LaurentPoly":
        if value == 0:
            return LaurentPoly.zero(self.variables)
        return LaurentPoly(self.variables,
                           {e: c * value for e, c in self.terms.items()})

    def __pow__(self, power: int) -> "LaurentPoly":
        if power < 0:
            raise ValueError("negative powers only via explicit monomials")
        result = LaurentPoly.constant(self.variables, 1)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    # ------------------------------------------------------------------
    # variable plumbing

    def with_variables(self, variables: Iterable[str]) -> "LaurentPoly":
        """Reinterpret over a different variable list.

        Dropped variables must have exponent 0 everywhere; added variables get
        exponent 0.
        """
        new_vars = tuple(variables)
        positions = []
        for v in new_vars:
            positions.append(self.variables.index(v) if v in self.variables else None)
        kept = set(v for v in new_vars if v in self.variables)
        dropped = [i for i, v in enumerate(self.variables) if v not in kept]
        terms: dict[tuple[int, ...], int] = {}
        for exp, coef in self.terms.items():
            for i in dropped:
                if exp[i] != 0:
                    raise VariableMismatchError(
                        f"cannot drop variable {self.variables[i]!r}: "
                        f"appears with exponent {exp[i]}")
            new_exp = tuple(0 if p is None else exp[p] for p in positions)
            terms[new_exp] = terms.get(new_exp, 0) + coef
        return LaurentPoly(new_vars, terms)

    # ------------------------------------------------------------------
    # serialization

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [{"exp": list(exp), "coef": coef}
                      for exp, coef in self.sorted_terms()],
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "LaurentPoly":
        variables = tuple(data["vars"])
        terms = {tuple(t["exp"]): int(t["coef"]) for t in data["terms"]}
        return LaurentPoly(variables, terms)

    def to_text(self) -> str:
        """Plain-text monomial list, sorted lexicographically by exponent vector.

        Format per term: ``<coef>`` or ``<coef>*v^e*...`` with zero exponents
        omitted; terms joined by `` + ``.  The zero polynomial prints ``0``.
        """
        if not self.terms:
            return "0"
        chunks = []
        for exp, coef in self.sorted_terms():
            factors = [str(coef)]
            for name, e in zip(self.variables, exp):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            chunks.append("*".join(factors))
        return " + ".join(chunks)

    def __str__(self) -> str:
        return self.to_text()


def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_neg(p: LaurentPoly) -> LaurentPoly:
    return -p


# ----------------------------------------------------------------------
# substitutions


def substitute(p: LaurentPoly, rule: str) -> LaurentPoly:
    """Apply one of the supported exact substitutions.

    Supported rules:

    - ``"t=-1"``      : drop t, multiply coefficients by (-1)^(t-exponent)
    - ``"u=1"``       : drop u
    - ``"u2=-q^-3"``  : u^(2j) -> (-1)^j q^(-3j); all u-exponents must be even
    - ``"u2=q^3"``    : u^(2j) -> (-1)^j q^(3j);  all u-exponents must be even
    - ``"lh=u"``      : l^a h^b -> u^(a-b)
    - ``"q=-A^-2"``   : q^k -> (-1)^k A^(-2k)
    - ``"u=1/u"``     : u -> u^-1 (grading flip; used for symmetric reflection)
    """
    if rule == "t=-1":
        return _drop_with_sign(p, "t", sign_per_unit=True)
    if rule == "u=1":
        return _drop_with_sign(p, "u", sign_per_unit=False)
    if rule in ("u2=-q^-3", "u2=q^3"):
        q_shift = -3 if rule == "u2=-q^-3" else 3
        iu = _index(p, "u")
        iq = _index(p, "q")
        terms: dict[tuple[int, ...], int] = {}
        for exp, coef in p.terms.items():
            ue = exp[iu]
            if ue % 2:
                raise SubstitutionError(
                    f"odd u-exponent {ue} under a u^2 substitution rule")
            j = ue // 2
            new = list(exp)
            new[iu] = 0
            new[iq] += q_shift * j
            key = tuple(new)
            value = terms.get(key, 0) + coef * (-1) ** (j % 2)
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        out_vars = tuple(v for v in p.variables if v != "u")
        return LaurentPoly(p.variables, terms).with_variables(out_vars)
    if rule == "lh=u":
        il = _index(p, "l")
        ih = _index(p, "h")
        out_vars = tuple("u" if v == "l" else v
                         for v in p.variables if v != "h")
        terms: dict[tuple[int, ...], int] = {}
        for exp, coef in p.terms.items():
            new = []
            for i, v in enumerate(p.variables):
                if v == "l":
                    new.append(exp[il] - exp[ih])
                elif v == "h":
                    continue
                else:
                    new.append(exp[i])
            key = tuple(new)
            value = terms.get(key, 0) + coef
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return LaurentPoly(out_vars, terms)
    if rule == "q=-A^-2":
        iq = _index(p, "q")
        out_vars = tuple("A" if v == "q" else v for v in p.variables)
        if out_vars.count("A") > 1:
            raise SubstitutionError("polynomial already contains A")
        terms: dict[tuple[int, ...], int] = {}
        for exp, coef in p.terms.items():
            k = exp[iq]
            new = list(exp)
            new[iq] = -2 * k
            key = tuple(new)
            value = terms.get(key, 0) + coef * (-1) ** (k % 2)
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return LaurentPoly(out_vars, terms)
    if rule == "u=1/u":
        iu = _index(p, "u")
        terms = {}
        for exp, coef in p.terms.items():
            new = list(exp)
            new[iu] = -new[iu]
            terms[tuple(new)] = coef
        return LaurentPoly(p.variables, terms)
    raise SubstitutionError(f"unknown substitution rule {rule!r}")


def _index(p: LaurentPoly, name: str) -> int:
    try:
        return p.variables.index(name)
    except ValueError:
        raise SubstitutionError(
            f"variable {name!r} not present in {p.variables}") from None


def _drop_with_sign(p: LaurentPoly, name: str, sign_per_unit: bool) -> LaurentPoly:
    i = _index(p, name)
    terms: dict[tuple[int, ...], int] = {}
    for exp, coef in p.terms.items():
        if sign_per_unit and exp[i] % 2:
            coef = -coef
        key = exp[:i] + (0,) + exp[i + 1:]
        value = terms.get(key, 0) + coef
        if value:
            terms[key] = value
        else:
            terms.pop(key, None)
    out_vars = tuple(v for j, v in enumerate(p.variables) if j != i)
    return LaurentPoly(p.variables, terms).with_variables(out_vars)


# ----------------------------------------------------------------------
# sparse matrices and exact rank


@dataclass(frozen=True)
class SparseMatrix:
    """Sparse matrix over Q given by (row, col, value) triples.

    Values may be ints or Fractions.  At most one entry per cell.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, object], ...]

    def __post_init__(self):
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if v == 0:
                raise ValueError(f"zero entry stored at ({r},{c})")
            seen.add((r, c))

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            tuple((c, r, v) for r, c, v in self.entries))


def rank(matrix: SparseMatrix) -> int:
    return rank_of_entries(matrix.rows, matrix.cols,
                           [(r, c, v) for r, c, v in matrix.entries])


def rank_of_entries(nrows: int, ncols: int, entries) -> int:
    """Exact rank over Q of a matrix given as (row, col, value) triples.

    Columns are processed in increasing order; within a column the pivot is
    the lowest-row +-1 entry when one exists (integer row operations only),
    else the lowest-row nonzero entry with Fraction arithmetic.  Deterministic
    by construction.
    """
    row_data: dict[int, dict[int, object]] = {}
    col_rows: dict[int, set[int]] = {}
    for r, c, v in entries:
        if v == 0:
            continue
        row_data.setdefault(r, {})[c] = v
        col_rows.setdefault(c, set()).add(r)

    def discard(r: int, c: int) -> None:
        row = row_data.get(r)
        if row is not None and c in row:
            del row[c]
            if not row:
                del row_data[r]
        rows_ = col_rows.get(c)
        if rows_ is not None:
            rows_.discard(r)
            if not rows_:
                del col_rows[c]

    def eliminate(pr: int, pc: int) -> None:
        pivot_row = dict(row_data[pr])
        pivot_val = pivot_row[pc]
        for r in sorted(col_rows.get(pc, ())):
            if r == pr:
                continue
            factor = _div(row_data[r][pc], pivot_val)
            for c, v in pivot_row.items():
                cur = row_data.get(r, {}).get(c, 0)
                new = cur - factor * v
                if new:
                    row_data.setdefault(r, {})[c] = new
                    col_rows.setdefault(c, set()).add(r)
                else:
                    discard(r, c)
        for c in list(pivot_row):
            discard(pr, c)

    rk = 0
    for pc in sorted(col_rows):
        rows_here = col_rows.get(pc)
        if not rows_here:
            continue
        units = sorted(r for r in rows_here
                       if row_data[r][pc] == 1 or row_data[r][pc] == -1)
        pr = units[0] if units else min(rows_here)
        eliminate(pr, pc)
        rk += 1
    return rk


def _div(a, b):
    if b == 1:
        return a
    if b == -1:
        return -a
    return Fraction(a) / Fraction(b)


def rank_mod_p(nrows: int, ncols: int, entries, prime: int = 2147483629) -> int:
    """Rank over GF(prime); a cheap probe used in tests as a bug detector only."""
    rows: list[dict[int, int]] = []
    grouped: dict[int, dict[int, int]] = {}
    for r, c, v in entries:
        grouped.setdefault(r, {})[c] = int(v) % prime
    rows = [row for row in grouped.values() if any(row.values())]
    rk = 0
    for pc in range(ncols):
        pivot = None
        for row in rows:
            if row.get(pc, 0) % prime:
                pivot = row
                break
        if pivot is None:
            continue
        rows.remove(pivot)
        inv = pow(pivot[pc], prime - 2, prime)
        for row in rows:
            f = row.get(pc, 0)
            if f:
                f = f * inv % prime
                for c, v in pivot.items():
                    row[c] = (row.get(c, 0) - f * v) % prime
        rk += 1
    return rk
