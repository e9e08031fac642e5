"""Exact sparse polynomial and rational-function arithmetic over GF(p).

The value model has three layers:

* ``SparsePoly``: a sparse polynomial over GF(p) in the variables of one
  ``VarTable``, stored as a canonical map from exponent tuples to nonzero
  residues.  Dict equality therefore decides polynomial equality.
* ``ParamRational``: a quotient of two parameter-only sparse polynomials.
  Equality is decided by cross multiplication, which is exact because the
  polynomial ring is an integral domain.  Normalisation only strips a
  common monomial factor and scales the denominator's leading coefficient
  to one; no multivariate gcd is ever computed.
* ``GeomPoly``: a polynomial in the geometric variables whose coefficients
  are ``ParamRational`` values.

All values are immutable after construction and every operation is a pure
function, so values may be shared freely between threads.

Roots of parameters never use fractional exponents.  A table of root depth
k reinterprets every parameter symbol as the p^k-th root of its depth-0
value, keeping all arithmetic inside one ordinary polynomial ring;
``lift_to`` and ``project_to`` translate between depths by rescaling
parameter exponents, and ``root_monomial`` names the p^j-th root of a
depth-0 parameter as a plain monomial.

The monomial order used for leading terms and trial division is graded
lexicographic in the variable order of the table, fixed globally, so
canonical forms and quotients are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

PARAM = "param"
GEOM = "geom"


class TableMismatchError(ValueError):
    """Operands were built over different variable tables."""


class RootDepthError(ValueError):
    """A parameter root beyond the table's depth was requested."""


class ZeroDenominatorError(ZeroDivisionError):
    """A substitution or construction produced a zero denominator."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """GF(p) arithmetic on int residues in [0, p)."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"characteristic must be a prime, got {self.p}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(p)")
        return pow(a, self.p - 2, self.p)


class VarTable:
    """Ordered variable context shared by all polynomials built over it.

    Variables are tagged ``param`` (generators of the coefficient field) or
    ``geom`` (geometric coordinates).  ``root_depth`` k means each param
    symbol denotes the p^k-th root of its depth-0 value, so the depth-0
    parameter equals symbol**(p**k).
    """

    __slots__ = ("names", "kinds", "field", "root_depth",
                 "_index", "param_indices", "geom_indices")

    def __init__(self, names, kinds, p: int = 2, root_depth: int = 0):
        names = tuple(names)
        kinds = tuple(kinds)
        if len(kinds) != len(names):
            raise ValueError("one kind tag per variable required")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for k in kinds:
            if k not in (PARAM, GEOM):
                raise ValueError(f"unknown variable kind {k!r}")
        if root_depth < 0:
            raise ValueError("root depth must be nonnegative")
        self.names = names
        self.kinds = kinds
        self.field = PrimeField(p)
        self.root_depth = root_depth
        self._index = {n: i for i, n in enumerate(names)}
        self.param_indices = tuple(i for i, k in enumerate(kinds) if k == PARAM)
        self.geom_indices = tuple(i for i, k in enumerate(kinds) if k == GEOM)

    @property
    def p(self) -> int:
        return self.field.p

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def kind(self, name: str) -> str:
        return self.kinds[self.index(name)]

    def root_extend(self, depth: int) -> VarTable:
        """Same variables, with param symbols read as p^depth-th roots."""
        return VarTable(self.names, self.kinds, self.p, depth)

    def __eq__(self, other):
        if not isinstance(other, VarTable):
            return NotImplemented
        return (self.names == other.names and self.kinds == other.kinds
                and self.p == other.p and self.root_depth == other.root_depth)

    def __hash__(self):
        return hash((self.names, self.kinds, self.p, self.root_depth))

    def __repr__(self):
        return f"VarTable({len(self.names)} vars, p={self.p}, depth={self.root_depth})"


def _same_table(a, b) -> None:
    if a.table != b.table:
        raise TableMismatchError("mismatched variable tables")


def _grlex_key(exp):
    return (sum(exp), exp)


class SparsePoly:
    """Canonical sparse polynomial over GF(p) in the table's variables."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms=()):
        width = len(table.names)
        p = table.p
        clean = {}
        for exp, c in dict(terms).items():
            exp = tuple(exp)
            if len(exp) != width:
                raise ValueError("exponent tuple has wrong width")
            if any(e < 0 for e in exp):
                raise ValueError("exponents must be nonnegative")
            c %= p
            if c:
                clean[exp] = c
        self.table = table
        self.terms = clean

    @staticmethod
    def _raw(table: VarTable, terms: dict) -> SparsePoly:
        poly = object.__new__(SparsePoly)
        poly.table = table
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls, table: VarTable) -> SparsePoly:
        return cls._raw(table, {})

    @classmethod
    def const(cls, table: VarTable, c: int) -> SparsePoly:
        c %= table.p
        if not c:
            return cls._raw(table, {})
        return cls._raw(table, {(0,) * len(table.names): c})

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> SparsePoly:
        if power < 0:
            raise ValueError("variable power must be nonnegative")
        if power == 0:
            return cls.const(table, 1)
        exp = [0] * len(table.names)
        exp[table.index(name)] = power
        return cls._raw(table, {tuple(exp): 1})

    @classmethod
    def monomial(cls, table: VarTable, exps: dict, coeff: int = 1) -> SparsePoly:
        coeff %= table.p
        if not coeff:
            return cls.zero(table)
        exp = [0] * len(table.names)
        for name, e in exps.items():
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            exp[table.index(name)] = e
        return cls._raw(table, {tuple(exp): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        width = len(self.table.names)
        return self.terms == {(0,) * width: 1}

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: SparsePoly) -> SparsePoly:
        _same_table(self, other)
        p = self.table.p
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = (out.get(exp, 0) + c) % p
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return SparsePoly._raw(self.table, out)

    def __neg__(self) -> SparsePoly:
        p = self.table.p
        if p == 2:
            return self
        return SparsePoly._raw(self.table, {e: -c % p for e, c in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def scaled(self, c: int) -> SparsePoly:
        p = self.table.p
        c %= p
        if c == 0:
            return SparsePoly.zero(self.table)
        if c == 1:
            return self
        return SparsePoly._raw(self.table, {e: (v * c) % p for e, v in self.terms.items()})

    def __mul__(self, other: SparsePoly) -> SparsePoly:
        _same_table(self, other)
        p = self.table.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = (out.get(e, 0) + c1 * c2) % p
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePoly._raw(self.table, out)

    def __pow__(self, n: int) -> SparsePoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.const(self.table, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def lead_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def frobenius(self) -> SparsePoly:
        # c**p = c in GF(p), so only exponents scale
        p = self.table.p
        return SparsePoly._raw(
            self.table,
            {tuple(e * p for e in exp): c for exp, c in self.terms.items()})

    def p_root(self) -> SparsePoly | None:
        """p-th root, or None when some exponent is not divisible by p."""
        p = self.table.p
        out = {}
        for exp, c in self.terms.items():
            if any(e % p for e in exp):
                return None
            out[tuple(e // p for e in exp)] = c
        return SparsePoly._raw(self.table, out)

    def monomial_content(self):
        width = len(self.table.names)
        if not self.terms:
            return (0,) * width
        mins = None
        for exp in self.terms:
            mins = exp if mins is None else tuple(map(min, mins, exp))
        return mins

    def divided_by_monomial(self, content) -> SparsePoly:
        return SparsePoly._raw(
            self.table,
            {tuple(e - m for e, m in zip(exp, content)): c
             for exp, c in self.terms.items()})

    def substituted(self, bindings: dict) -> SparsePoly:
        """Simultaneous substitution of variables by SparsePoly values."""
        table = self.table
        idx_bind = {}
        for name, val in bindings.items():
            _same_table(self, val)
            idx_bind[table.index(name)] = val
        acc = SparsePoly.zero(table)
        for exp, c in self.terms.items():
            residual = list(exp)
            pieces = []
            for i, val in idx_bind.items():
                e = exp[i]
                if e:
                    residual[i] = 0
                    pieces.append(val ** e)
            term = SparsePoly._raw(table, {tuple(residual): c})
            for piece in pieces:
                term = term * piece
            acc = acc + term
        return acc

    def is_param_only(self) -> bool:
        geom = self.table.geom_indices
        return all(not any(exp[i] for i in geom) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        idx = self.table.index(name)
        return max((exp[idx] for exp in self.terms), default=0)

    def to_json(self, var_names=None) -> list:
        names = list(var_names) if var_names is not None else list(self.table.names)
        idxs = [self.table.index(n) for n in names]
        allowed = set(idxs)
        out = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            if any(e and i not in allowed for i, e in enumerate(exp)):
                raise ValueError("term uses a variable outside the serialised list")
            out.append({"coeff": self.terms[exp], "exponents": [exp[i] for i in idxs]})
        return out

    @classmethod
    def from_json(cls, table: VarTable, data, var_names=None) -> SparsePoly:
        names = list(var_names) if var_names is not None else list(table.names)
        idxs = [table.index(n) for n in names]
        terms = {}
        for item in data:
            exp = [0] * len(table.names)
            for pos, e in zip(idxs, item["exponents"]):
                exp[pos] = e
            terms[tuple(exp)] = item["coeff"]
        return cls(table, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.table.names
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = [f"{names[i]}^{e}" if e > 1 else names[i]
                       for i, e in enumerate(exp) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"SparsePoly({self})"


class ParamRational:
    """Quotient of parameter-only sparse polynomials.

    The denominator is never zero.  Equality is tested by cross
    multiplication, so the light normalisation here (strip a common
    monomial factor, monic denominator) is cosmetic, not semantic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None):
        table = num.table
        if den is None:
            den = SparsePoly.const(table, 1)
        _same_table(num, den)
        if den.is_zero():
            raise ZeroDenominatorError("denominator is zero")
        if not (num.is_param_only() and den.is_param_only()):
            raise ValueError("rational coefficients must involve parameters only")
        if num.is_zero():
            den = SparsePoly.const(table, 1)
        else:
            common = tuple(map(min, num.monomial_content(), den.monomial_content()))
            if any(common):
                num = num.divided_by_monomial(common)
                den = den.divided_by_monomial(common)
            _, lc = den.lead_term()
            if lc != 1:
                inv = table.field.inv(lc)
                num = num.scaled(inv)
                den = den.scaled(inv)
        self.num = num
        self.den = den

    @property
    def table(self) -> VarTable:
        return self.num.table

    @classmethod
    def zero(cls, table: VarTable) -> ParamRational:
        return cls(SparsePoly.zero(table))

    @classmethod
    def one(cls, table: VarTable) -> ParamRational:
        return cls(SparsePoly.const(table, 1))

    @classmethod
    def const(cls, table: VarTable, c: int) -> ParamRational:
        return cls(SparsePoly.const(table, c))

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> ParamRational:
        return cls(SparsePoly.var(table, name, power))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def den_is_one(self) -> bool:
        return self.den.is_one()

    def __add__(self, other: ParamRational) -> ParamRational:
        _same_table(self.num, other.num)
        if self.den == other.den:
            return ParamRational(self.num + other.num, self.den)
        return ParamRational(self.num * other.den + other.num * self.den,
                             self.den * other.den)

    def __neg__(self) -> ParamRational:
        return ParamRational(-self.num, self.den)

    def __sub__(self, other: ParamRational) -> ParamRational:
        return self + (-other)

    def __mul__(self, other: ParamRational) -> ParamRational:
        _same_table(self.num, other.num)
        return ParamRational(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: ParamRational) -> ParamRational:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational")
        return ParamRational(self.num * other.den, self.den * other.num)

    def inverse(self) -> ParamRational:
        if self.is_zero():
            raise ZeroDivisionError("zero rational has no inverse")
        return ParamRational(self.den, self.num)

    def scaled(self, c: int) -> ParamRational:
        return ParamRational(self.num.scaled(c), self.den)

    def __pow__(self, n: int) -> ParamRational:
        if n < 0:
            return self.inverse() ** (-n)
        return ParamRational(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, int):
            other = ParamRational.const(self.table, other)
        if not isinstance(other, ParamRational):
            return NotImplemented
        _same_table(self.num, other.num)
        if self.den.terms == other.den.terms:
            return self.num.terms == other.num.terms
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def frobenius(self) -> ParamRational:
        return ParamRational(self.num.frobenius(), self.den.frobenius())

    def p_root(self) -> ParamRational | None:
        """p-th root, or None when the value is not a p-th power.

        Uses (n/d)^(1/p) = (n * d^(p-1))^(1/p) / d, which keeps the
        computation inside the polynomial ring.
        """
        p = self.table.p
        prod = self.num * self.den ** (p - 1)
        root = prod.p_root()
        if root is None:
            return None
        return ParamRational(root, self.den)

    def substituted(self, bindings: dict) -> ParamRational:
        num = self.num.substituted(bindings)
        den = self.den.substituted(bindings)
        if den.is_zero():
            raise ZeroDenominatorError("substitution produced a zero denominator")
        return ParamRational(num, den)

    def to_json(self) -> dict:
        names = [self.table.names[i] for i in self.table.param_indices]
        return {"num": self.num.to_json(names), "den": self.den.to_json(names)}

    @classmethod
    def from_json(cls, table: VarTable, data: dict) -> ParamRational:
        names = [table.names[i] for i in table.param_indices]
        return cls(SparsePoly.from_json(table, data["num"], names),
                   SparsePoly.from_json(table, data["den"], names))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"ParamRational({self})"


def _as_rational(table: VarTable, value) -> ParamRational:
    if isinstance(value, ParamRational):
        if value.table != table:
            raise TableMismatchError("mismatched variable tables")
        return value
    if isinstance(value, SparsePoly):
        return ParamRational(value)
    if isinstance(value, int):
        return ParamRational.const(table, value)
    raise TypeError(f"cannot use {type(value).__name__} as a coefficient")


class GeomPoly:
    """Polynomial in geometric variables with ``ParamRational`` coefficients.

    Keys are full-width exponent tuples whose parameter slots are zero; no
    zero coefficient is ever stored.  The ring axioms hold exactly and the
    Frobenius p-th power is a ring endomorphism.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms=()):
        width = len(table.names)
        pidx = table.param_indices
        clean = {}
        for exp, c in dict(terms).items():
            exp = tuple(exp)
            if len(exp) != width:
                raise ValueError("exponent tuple has wrong width")
            if any(e < 0 for e in exp):
                raise ValueError("exponents must be nonnegative")
            if any(exp[i] for i in pidx):
                raise ValueError("geometric keys cannot carry parameter exponents")
            c = _as_rational(table, c)
            if not c.is_zero():
                clean[exp] = c
        self.table = table
        self.terms = clean

    @staticmethod
    def _raw(table: VarTable, terms: dict) -> GeomPoly:
        poly = object.__new__(GeomPoly)
        poly.table = table
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls, table: VarTable) -> GeomPoly:
        return cls._raw(table, {})

    @classmethod
    def one(cls, table: VarTable) -> GeomPoly:
        return cls.const(table, 1)

    @classmethod
    def const(cls, table: VarTable, value) -> GeomPoly:
        c = _as_rational(table, value)
        if c.is_zero():
            return cls._raw(table, {})
        return cls._raw(table, {(0,) * len(table.names): c})

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> GeomPoly:
        # a parameter name yields the constant with that rational coefficient
        if table.kind(name) == PARAM:
            return cls.const(table, ParamRational.var(table, name, power))
        if power < 0:
            raise ValueError("variable power must be nonnegative")
        if power == 0:
            return cls.one(table)
        exp = [0] * len(table.names)
        exp[table.index(name)] = power
        return cls._raw(table, {tuple(exp): ParamRational.one(table)})

    @classmethod
    def monomial(cls, table: VarTable, exps: dict, coeff=1) -> GeomPoly:
        c = _as_rational(table, coeff)
        if c.is_zero():
            return cls.zero(table)
        exp = [0] * len(table.names)
        for name, e in exps.items():
            if table.kind(name) != GEOM:
                raise ValueError(f"{name!r} is not a geometric variable")
            exp[table.index(name)] = e
        return cls(table, {tuple(exp): c})

    @classmethod
    def coerce(cls, table: VarTable, value) -> GeomPoly:
        if isinstance(value, GeomPoly):
            if value.table != table:
                raise TableMismatchError("mismatched variable tables")
            return value
        return cls.const(table, value)

    @classmethod
    def from_sparse(cls, poly: SparsePoly) -> GeomPoly:
        """Split a mixed sparse polynomial into geometric monomials with
        parameter-polynomial coefficients."""
        table = poly.table
        grouped: dict = {}
        for exp, c in poly.terms.items():
            gexp = tuple(e if i in table.geom_indices else 0
                         for i, e in enumerate(exp))
            pexp = tuple(e if i in table.param_indices else 0
                         for i, e in enumerate(exp))
            grouped.setdefault(gexp, {})[pexp] = c
        return cls._raw(table, {
            g: ParamRational(SparsePoly._raw(table, ts))
            for g, ts in grouped.items()})

    def to_sparse(self) -> SparsePoly:
        """Expand into a plain sparse polynomial; requires denominator-free
        coefficients."""
        table = self.table
        acc: dict = {}
        p = table.p
        for exp, c in self.terms.items():
            if not c.den.is_one():
                raise ValueError("polynomial has a nontrivial denominator")
            for pexp, pc in c.num.terms.items():
                key = tuple(a + b for a, b in zip(exp, pexp))
                s = (acc.get(key, 0) + pc) % p
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return SparsePoly._raw(table, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        width = len(self.table.names)
        key = (0,) * width
        return set(self.terms) == {key} and self.terms[key].is_one()

    def __eq__(self, other):
        if not isinstance(other, GeomPoly):
            return NotImplemented
        if self.table != other.table:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def __add__(self, other: GeomPoly) -> GeomPoly:
        _same_table(self, other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            cur = out.get(exp)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        return GeomPoly._raw(self.table, out)

    def __neg__(self) -> GeomPoly:
        if self.table.p == 2:
            return self
        return GeomPoly._raw(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: GeomPoly) -> GeomPoly:
        return self + (-other)

    def __mul__(self, other: GeomPoly) -> GeomPoly:
        _same_table(self, other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                cur = out.get(e)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return GeomPoly._raw(self.table, out)

    def scaled(self, c) -> GeomPoly:
        c = _as_rational(self.table, c)
        if c.is_zero():
            return GeomPoly.zero(self.table)
        return GeomPoly._raw(self.table, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> GeomPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = GeomPoly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def lead_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def frobenius(self) -> GeomPoly:
        p = self.table.p
        return GeomPoly._raw(
            self.table,
            {tuple(e * p for e in exp): c.frobenius()
             for exp, c in self.terms.items()})

    def partial(self, name: str) -> GeomPoly:
        """Formal partial derivative with respect to a geometric variable."""
        table = self.table
        idx = table.index(name)
        if table.kinds[idx] != GEOM:
            raise ValueError(f"{name!r} is not a geometric variable")
        p = table.p
        out = {}
        for exp, c in self.terms.items():
            e = exp[idx]
            if not e:
                continue
            factor = e % p
            if not factor:
                continue
            lowered = exp[:idx] + (e - 1,) + exp[idx + 1:]
            nc = c.scaled(factor)
            cur = out.get(lowered)
            s = nc if cur is None else cur + nc
            if s.is_zero():
                out.pop(lowered, None)
            else:
                out[lowered] = s
        return GeomPoly._raw(table, out)

    def substituted(self, bindings: dict) -> GeomPoly:
        """Simultaneous substitution; geometric and parameter variables may
        both be bound.  Parameter bindings must be parameter polynomials
        and may not send any coefficient denominator to zero."""
        table = self.table
        geom_bind = {}
        param_bind = {}
        for name, value in bindings.items():
            idx = table.index(name)
            gval = GeomPoly.coerce(table, value)
            if table.kinds[idx] == GEOM:
                geom_bind[idx] = gval
            else:
                c = gval.as_param_rational()
                if not c.den.is_one():
                    raise ValueError(
                        "parameter substitution value must be a polynomial")
                param_bind[name] = c.num
        out = GeomPoly.zero(table)
        for exp, coeff in self.terms.items():
            c = coeff.substituted(param_bind) if param_bind else coeff
            if c.is_zero():
                continue
            residual = list(exp)
            factors = []
            for idx, val in geom_bind.items():
                e = exp[idx]
                if e:
                    residual[idx] = 0
                    factors.append(val ** e)
            term = GeomPoly._raw(table, {tuple(residual): c})
            for f in factors:
                term = term * f
            out = out + term
        return out

    def as_param_rational(self) -> ParamRational:
        if not self.terms:
            return ParamRational.zero(self.table)
        width = len(self.table.names)
        key = (0,) * width
        if set(self.terms) != {key}:
            raise ValueError("polynomial is not constant in the geometry")
        return self.terms[key]

    def coefficient(self, exps: dict) -> ParamRational:
        exp = [0] * len(self.table.names)
        for name, e in exps.items():
            exp[self.table.index(name)] = e
        return self.terms.get(tuple(exp), ParamRational.zero(self.table))

    def degree_in(self, name: str) -> int:
        idx = self.table.index(name)
        return max((exp[idx] for exp in self.terms), default=0)

    def to_json(self, var_names=None) -> list:
        table = self.table
        names = (list(var_names) if var_names is not None
                 else [table.names[i] for i in table.geom_indices])
        idxs = [table.index(n) for n in names]
        allowed = set(idxs)
        pnames = [table.names[i] for i in table.param_indices]
        out = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            if any(e and i not in allowed for i, e in enumerate(exp)):
                raise ValueError("term uses a variable outside the serialised list")
            c = self.terms[exp]
            out.append({"coeff_num": c.num.to_json(pnames),
                        "coeff_den": c.den.to_json(pnames),
                        "exponents": [exp[i] for i in idxs]})
        return out

    @classmethod
    def from_json(cls, table: VarTable, data, var_names=None) -> GeomPoly:
        names = (list(var_names) if var_names is not None
                 else [table.names[i] for i in table.geom_indices])
        idxs = [table.index(n) for n in names]
        pnames = [table.names[i] for i in table.param_indices]
        terms = {}
        for item in data:
            exp = [0] * len(table.names)
            for pos, e in zip(idxs, item["exponents"]):
                exp[pos] = e
            coeff = ParamRational(
                SparsePoly.from_json(table, item["coeff_num"], pnames),
                SparsePoly.from_json(table, item["coeff_den"], pnames))
            terms[tuple(exp)] = coeff
        return cls(table, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.table.names
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = [f"{names[i]}^{e}" if e > 1 else names[i]
                       for i, e in enumerate(exp) if e]
            cs = str(c)
            needs_parens = (" " in cs or "/" in cs)
            if not factors:
                parts.append(f"({cs})" if needs_parens else cs)
            elif c.is_one():
                parts.append("*".join(factors))
            else:
                head = f"({cs})" if needs_parens else cs
                parts.append("*".join([head] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"GeomPoly({self})"


class Derivation:
    """Map from variables to polynomial images, extended by the Leibniz rule.

    Variables without an image map to zero.  Images of parameter variables
    act on coefficients through the quotient rule; since derivations kill
    p-th powers, a Frobenius image always derives to zero.
    """

    __slots__ = ("table", "images", "_geom", "_param")

    def __init__(self, table: VarTable, images: dict):
        self.table = table
        clean = {}
        for name, img in images.items():
            idx = table.index(name)
            img = GeomPoly.coerce(table, img)
            if not img.is_zero():
                clean[name] = img
        self.images = clean
        self._geom = tuple((table.index(n), img) for n, img in clean.items()
                           if table.kind(n) == GEOM)
        self._param = tuple((table.index(n), img) for n, img in clean.items()
                            if table.kind(n) == PARAM)

    def of_var(self, name: str) -> GeomPoly:
        self.table.index(name)
        return self.images.get(name, GeomPoly.zero(self.table))

    def _apply_sparse(self, poly: SparsePoly) -> GeomPoly:
        table = self.table
        p = table.p
        acc = GeomPoly.zero(table)
        for exp, c in poly.terms.items():
            for idx, img in self._param:
                e = exp[idx]
                if not e:
                    continue
                factor = (e * c) % p
                if not factor:
                    continue
                lowered = exp[:idx] + (e - 1,) + exp[idx + 1:]
                mono = ParamRational(SparsePoly._raw(table, {lowered: factor}))
                acc = acc + GeomPoly.const(table, mono) * img
        return acc

    def _apply_rational(self, c: ParamRational) -> GeomPoly:
        dn = self._apply_sparse(c.num)
        dd = self._apply_sparse(c.den)
        table = self.table
        if dn.is_zero() and dd.is_zero():
            return GeomPoly.zero(table)
        one = SparsePoly.const(table, 1)
        part = dn.scaled(ParamRational(one, c.den))
        if not dd.is_zero():
            part = part - dd.scaled(ParamRational(c.num, c.den * c.den))
        return part

    def __call__(self, f: GeomPoly) -> GeomPoly:
        _same_table(self, f)
        table = self.table
        p = table.p
        acc = GeomPoly.zero(table)
        for exp, coeff in f.terms.items():
            for idx, img in self._geom:
                e = exp[idx]
                if not e:
                    continue
                factor = e % p
                if not factor:
                    continue
                lowered = exp[:idx] + (e - 1,) + exp[idx + 1:]
                term = GeomPoly._raw(table, {lowered: coeff.scaled(factor)})
                acc = acc + term * img
            if self._param:
                dc = self._apply_rational(coeff)
                if not dc.is_zero():
                    acc = acc + dc * GeomPoly._raw(
                        table, {exp: ParamRational.one(table)})
        return acc


def poly_mul(a: GeomPoly, b: GeomPoly) -> GeomPoly:
    """Exact product of two polynomials over one table."""
    return a * b


def frobenius(f):
    """p-th power of a polynomial or rational value."""
    return f.frobenius()


def substitute(f: GeomPoly, bindings: dict) -> GeomPoly:
    """Simultaneous substitution of geometric or parameter variables."""
    return f.substituted(bindings)


def derive(delta: Derivation, f: GeomPoly) -> GeomPoly:
    """Image of f under the derivation, by the Leibniz rule."""
    return delta(f)


def rational_eq(a: ParamRational, b: ParamRational) -> bool:
    """Exact equality by cross multiplication."""
    return a == b


def root_extend(table: VarTable, depth: int) -> VarTable:
    """Table whose parameter symbols denote p^depth-th roots."""
    return table.root_extend(depth)


def exact_divide(f: GeomPoly, g: GeomPoly) -> GeomPoly | None:
    """Quotient f/g when g divides f exactly, else None.

    Multivariate trial division against the fixed graded-lex order; the
    first leading term not divisible by g's leading term already certifies
    a nonzero remainder, so the scan can stop there.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    _same_table(f, g)
    table = f.table
    g_exp, g_c = g.lead_term()
    quotient: dict = {}
    r = f
    while not r.is_zero():
        r_exp, r_c = r.lead_term()
        step = tuple(a - b for a, b in zip(r_exp, g_exp))
        if any(e < 0 for e in step):
            return None
        c = r_c / g_c
        quotient[step] = c
        r = r - GeomPoly._raw(table, {step: c}) * g
    return GeomPoly._raw(table, quotient)


def lift_to(value, table: VarTable):
    """Rewrite a value over a deeper-rooted compatible table.

    A parameter exponent e becomes e * p^(depth difference): the depth-k
    symbol raised to p^k is the depth-0 parameter.
    """
    src = value.table
    if (src.names, src.kinds, src.p) != (table.names, table.kinds, table.p):
        raise TableMismatchError("tables differ in more than root depth")
    shift = table.root_depth - src.root_depth
    if shift < 0:
        raise RootDepthError("target table is shallower; use project_to")
    scale = src.p ** shift
    return _rescale_params(value, table, scale)


def project_to(value, table: VarTable):
    """Inverse of lift_to; fails when an exponent is not divisible."""
    src = value.table
    if (src.names, src.kinds, src.p) != (table.names, table.kinds, table.p):
        raise TableMismatchError("tables differ in more than root depth")
    shift = src.root_depth - table.root_depth
    if shift < 0:
        raise RootDepthError("target table is deeper; use lift_to")
    return _rescale_params(value, table, 1, down=src.p ** shift)


def _rescale_params(value, table: VarTable, scale, down: int = 0):
    pidx = set(table.param_indices)

    def scale_exp(exp):
        if down:
            out = []
            for i, e in enumerate(exp):
                if i in pidx:
                    if e % down:
                        raise RootDepthError(
                            "expression does not descend to the shallower table")
                    out.append(e // down)
                else:
                    out.append(e)
            return tuple(out)
        return tuple(e * scale if i in pidx else e for i, e in enumerate(exp))

    if isinstance(value, SparsePoly):
        return SparsePoly._raw(table, {scale_exp(e): c
                                       for e, c in value.terms.items()})
    if isinstance(value, ParamRational):
        return ParamRational(_rescale_params(value.num, table, scale, down),
                             _rescale_params(value.den, table, scale, down))
    if isinstance(value, GeomPoly):
        return GeomPoly._raw(table, {e: _rescale_params(c, table, scale, down)
                                     for e, c in value.terms.items()})
    raise TypeError(f"cannot rescale {type(value).__name__}")


def root_monomial(table: VarTable, name: str, j: int) -> SparsePoly:
    """The p^j-th root of the depth-0 parameter behind ``name``.

    At depth k this is symbol**(p**(k-j)); roots beyond the depth fail.
    """
    k = table.root_depth
    if j < 0 or j > k:
        raise RootDepthError(f"p^{j}-th root needs depth >= {j}, table has {k}")
    return SparsePoly.var(table, name, table.p ** (k - j))


def parse(table: VarTable, text: str) -> GeomPoly:
    """Small helper turning 'x1^2*x2 + a0*x3 + 2' into a GeomPoly."""
    result = GeomPoly.zero(table)
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty term in polynomial text")
        coeff = 1
        geom_exps: dict = {}
        param_exps: dict = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, _, e_text = factor.partition("^")
                name = name.strip()
                e = int(e_text)
            else:
                name, e = factor, 1
            if name.lstrip("-").isdigit():
                coeff *= int(name) ** e
                continue
            target = geom_exps if table.kind(name) == GEOM else param_exps
            target[name] = target.get(name, 0) + e
        term = GeomPoly.monomial(
            table, geom_exps, SparsePoly.monomial(table, param_exps, coeff))
        result = result + term
    return result
