"""Linear algebra over the chart base ring for the quotient computation.

On the chart i0 the double cover has coordinate ring M = K[x]/(q), a free
rank-8 module over the base ring S = K[u]/(r_0) with the square-free
basis 1, x_a, x_b, x_c, x_a x_b, ..., x_a x_b x_c, where u_m stands for
x_m^2.  S itself is realised canonically as a polynomial ring in two of
the u's by eliminating the u with the highest index through r_0.

The quotient surface's chart ring is the kernel of the foliation
derivation acting S-linearly on M.  The kernel is computed by exact
Gaussian elimination over Frac(S) and denominators are cleared afterwards,
so every returned coordinate lies in S and the matrix identity
mat * v = 0 is rechecked exactly.

``Presentation`` carries the expected generators, relations and embedding
of the quotient ring; ``verify_presentation`` certifies them against the
computed kernel.  ``normal_form`` rewrites away all quadratic monomials in
the t generators, which terminates because every rewrite strictly lowers
the t-degree of the monomial it replaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import (
    GeomPoly,
    ParamRational,
    VarTable,
    exact_divide,
)
from .reports import CheckResult, check

# basis slots as subsets of the three chart coordinates, in the fixed order
# 1, x_a, x_b, x_c, x_a x_b, x_a x_c, x_b x_c, x_a x_b x_c
_SUBSETS = ((), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
_SLOT_OF = {bits: slot for slot, bits in enumerate(_SUBSETS)}


class DerivationNotLinearError(ValueError):
    """The derivation fails S-linearity; the message names the generator."""


def alpha_value(table: VarTable, i: int) -> ParamRational:
    """The depth-0 parameter a_i expressed in the table's root symbols."""
    return ParamRational.var(table, f"a{i}", table.p ** table.root_depth)


class BaseRingS:
    """The ring K[u_a, u_b, u_c]/(r_0) on chart i0, canonically a polynomial
    ring in two u's after eliminating the highest-index one via r_0."""

    __slots__ = ("table", "chart", "others", "x_names", "u_names", "t_names",
                 "elim_name", "r0", "_elim_binding")

    def __init__(self, table: VarTable, chart: int):
        if table.p != 2:
            raise ValueError("the quotient machinery requires characteristic 2")
        if chart not in (0, 1, 2, 3):
            raise ValueError("chart index must be in 0..3")
        self.table = table
        self.chart = chart
        self.others = tuple(m for m in range(4) if m != chart)
        self.x_names = tuple(f"x{m}" for m in self.others)
        self.u_names = tuple(f"u{m}" for m in self.others)
        self.t_names = tuple(f"t{m}" for m in self.others)
        self.elim_name = self.u_names[-1]
        a = {i: alpha_value(table, i) for i in range(4)}
        r0 = GeomPoly.const(table, a[chart])
        for m in self.others:
            r0 = r0 + GeomPoly.var(table, f"u{m}").scaled(a[m])
        self.r0 = r0
        elim = self.others[-1]
        rest = GeomPoly.const(table, a[chart])
        for m in self.others[:-1]:
            rest = rest + GeomPoly.var(table, f"u{m}").scaled(a[m])
        self._elim_binding = {self.elim_name: (-rest).scaled(a[elim].inverse())}

    def reduce(self, f: GeomPoly) -> GeomPoly:
        """Canonical representative with the eliminated u substituted away."""
        return f.substituted(self._elim_binding)

    def is_zero(self, f: GeomPoly) -> bool:
        return self.reduce(f).is_zero()

    def eq(self, f: GeomPoly, g: GeomPoly) -> bool:
        return self.reduce(f - g).is_zero()

    def exact_divide(self, f: GeomPoly, g: GeomPoly) -> GeomPoly | None:
        """Exact quotient in the canonical polynomial coordinates."""
        return exact_divide(self.reduce(f), self.reduce(g))


class ModuleVector:
    """Element of the rank-8 free S-module M in the square-free basis."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: BaseRingS, coords):
        coords = tuple(coords)
        if len(coords) != 8:
            raise ValueError("module vectors have eight coordinates")
        self.ring = ring
        self.coords = coords

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return all(self.ring.eq(a, b) for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector(self.ring, tuple(
            self.ring.reduce(a + b) for a, b in zip(self.coords, other.coords)))

    def scaled(self, s: GeomPoly) -> "ModuleVector":
        return ModuleVector(self.ring, tuple(
            self.ring.reduce(c * s) for c in self.coords))

    def as_mixed_poly(self) -> GeomPoly:
        acc = GeomPoly.zero(self.ring.table)
        for slot, c in enumerate(self.coords):
            acc = acc + c * basis_monomial(self.ring, slot)
        return acc

    def as_x_poly(self) -> GeomPoly:
        table = self.ring.table
        back = {un: GeomPoly.var(table, xn) ** 2
                for un, xn in zip(self.ring.u_names, self.ring.x_names)}
        return self.as_mixed_poly().substituted(back)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def basis_monomial(ring: BaseRingS, slot: int) -> GeomPoly:
    mono = GeomPoly.one(ring.table)
    for i in _SUBSETS[slot]:
        mono = mono * GeomPoly.var(ring.table, ring.x_names[i])
    return mono


def to_module_vector(f: GeomPoly, ring: BaseRingS) -> ModuleVector:
    """Coordinates of f in the square-free basis, rewriting x_m^2 -> u_m."""
    table = ring.table
    x_idx = tuple(table.index(n) for n in ring.x_names)
    u_idx = tuple(table.index(n) for n in ring.u_names)
    foreign = [i for i in table.geom_indices if i not in x_idx]
    coords = [GeomPoly.zero(table) for _ in range(8)]
    for exp, c in f.terms.items():
        if any(exp[i] for i in foreign):
            raise ValueError("expected a polynomial in the chart coordinates")
        key = [0] * len(table.names)
        bits = []
        for pos in range(3):
            e = exp[x_idx[pos]]
            if e & 1:
                bits.append(pos)
            key[u_idx[pos]] = e >> 1
        slot = _SLOT_OF[tuple(bits)]
        coords[slot] = coords[slot] + GeomPoly._raw(table, {tuple(key): c})
    return ModuleVector(ring, tuple(ring.reduce(c) for c in coords))


def derivation_matrix(delta, ring: BaseRingS):
    """8x8 matrix of the derivation on M over S; column j is the vector of
    the image of the j-th basis monomial.

    S-linearity is verified first: the derivation must kill every
    parameter and every square of a chart coordinate.
    """
    table = ring.table
    for i in table.param_indices:
        name = table.names[i]
        if not delta.of_var(name).is_zero():
            raise DerivationNotLinearError(
                f"derivation does not kill the parameter {name}")
    for xn in ring.x_names:
        sq = GeomPoly.var(table, xn) ** 2
        if not delta(sq).is_zero():
            raise DerivationNotLinearError(
                f"derivation does not kill {xn}^2")
    cols = [to_module_vector(delta(basis_monomial(ring, j)), ring)
            for j in range(8)]
    return [[cols[j].coords[i] for j in range(8)] for i in range(8)]


def matrix_apply(mat, vec: ModuleVector) -> ModuleVector:
    ring = vec.ring
    out = []
    for row in mat:
        acc = GeomPoly.zero(ring.table)
        for entry, c in zip(row, vec.coords):
            if entry.is_zero() or c.is_zero():
                continue
            acc = acc + entry * c
        out.append(ring.reduce(acc))
    return ModuleVector(ring, tuple(out))


class SFraction:
    """Fraction of canonical S-elements, used for exact elimination."""

    __slots__ = ("num", "den")

    def __init__(self, num: GeomPoly, den: GeomPoly | None = None):
        table = num.table
        if den is None:
            den = GeomPoly.one(table)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in a ring fraction")
        if num.is_zero():
            den = GeomPoly.one(table)
        else:
            _, lc = den.lead_term()
            if not lc.is_one():
                inv = lc.inverse()
                num = num.scaled(inv)
                den = den.scaled(inv)
        self.num = num
        self.den = den

    @classmethod
    def zero(cls, table: VarTable) -> "SFraction":
        return cls(GeomPoly.zero(table))

    @classmethod
    def one(cls, table: VarTable) -> "SFraction":
        return cls(GeomPoly.one(table))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "SFraction") -> "SFraction":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return SFraction(self.num + other.num, self.den)
        return SFraction(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    def __neg__(self) -> "SFraction":
        return SFraction(-self.num, self.den)

    def __sub__(self, other: "SFraction") -> "SFraction":
        return self + (-other)

    def __mul__(self, other: "SFraction") -> "SFraction":
        return SFraction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "SFraction") -> "SFraction":
        return self * other.inverse()

    def inverse(self) -> "SFraction":
        if self.is_zero():
            raise ZeroDivisionError("zero fraction has no inverse")
        return SFraction(self.den, self.num)

    def __eq__(self, other):
        if not isinstance(other, SFraction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _rref(rows, width: int):
    """Reduced row echelon form in place over SFraction entries.

    Pivots are the first nonzero entries in column order; row operations
    act on the full row so trailing augmented columns stay consistent.
    """
    nrows = len(rows)
    pivots = []
    r = 0
    for col in range(width):
        pivot_row = None
        for i in range(r, nrows):
            if not rows[i][col].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return pivots


def kernel_basis(mat, ring: BaseRingS) -> list[ModuleVector]:
    """Kernel of the matrix over Frac(S), denominators cleared into S.

    Every returned vector is rechecked against mat * v = 0 exactly.
    """
    n = len(mat)
    table = ring.table
    rows = [[SFraction(e) for e in row] for row in mat]
    pivots = _rref(rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        coords = [SFraction.zero(table) for _ in range(n)]
        coords[free] = SFraction.one(table)
        for r, pc in enumerate(pivots):
            coords[pc] = -rows[r][free]
        vec = _clear_denominators(coords, ring)
        if not matrix_apply(mat, vec).is_zero():
            raise ArithmeticError("kernel vector fails the exact matrix identity")
        basis.append(vec)
    return basis


def _clear_denominators(coords, ring: BaseRingS) -> ModuleVector:
    out = []
    for i, c in enumerate(coords):
        num = c.num
        for j, other in enumerate(coords):
            if j != i:
                num = num * other.den
        out.append(ring.reduce(num))
    # tidy by the common monomial factor and a leading unit; both are
    # invertible scalings over Frac(S), so the kernel property is kept
    content = None
    for g in out:
        for exp in g.terms:
            content = exp if content is None else tuple(map(min, content, exp))
    if content is not None and any(content):
        out = [GeomPoly._raw(ring.table,
                             {tuple(e - m for e, m in zip(exp, content)): v
                              for exp, v in g.terms.items()})
               for g in out]
    lead = next((g for g in out if not g.is_zero()), None)
    if lead is not None:
        _, lc = lead.lead_term()
        if not lc.is_one():
            inv = lc.inverse()
            out = [g.scaled(inv) for g in out]
    return ModuleVector(ring, tuple(out))


@dataclass
class Presentation:
    """Named generators and relations of a quotient chart ring, with the
    embedding of each generator into the double cover's chart ring."""

    chart: int
    generators: list[str]
    relations: dict[str, GeomPoly]
    embedding: dict[str, GeomPoly]
    table: VarTable = field(repr=False)

    @property
    def u_names(self):
        return self.generators[:3]

    @property
    def t_names(self):
        return self.generators[3:]

    @property
    def x_names(self):
        return [f"x{m}" for m in range(4) if m != self.chart]

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "generators": list(self.generators),
            "relations": [{"name": name, "terms": rel.to_json(self.generators)}
                          for name, rel in self.relations.items()],
            "embedding": {name: img.to_json(self.x_names)
                          for name, img in self.embedding.items()},
        }

    @classmethod
    def from_json(cls, data: dict, table: VarTable) -> "Presentation":
        generators = list(data["generators"])
        relations = {item["name"]: GeomPoly.from_json(table, item["terms"], generators)
                     for item in data["relations"]}
        x_names = [f"x{m}" for m in range(4) if m != data["chart"]]
        embedding = {name: GeomPoly.from_json(table, terms, x_names)
                     for name, terms in data["embedding"].items()}
        return cls(chart=data["chart"], generators=generators,
                   relations=relations, embedding=embedding, table=table)


def t_rewrite_rules(pres: Presentation) -> dict:
    """Rewrite rules sending each bare quadratic t-monomial to its
    S-linear normal form, read off from the relations."""
    table = pres.table
    t_idx = [table.index(n) for n in pres.t_names]
    rules = {}
    for rel in pres.relations.values():
        quads = [(exp, c) for exp, c in rel.terms.items()
                 if sum(exp[i] for i in t_idx) == 2]
        if len(quads) != 1:
            continue
        exp, c = quads[0]
        if any(e for i, e in enumerate(exp) if i not in t_idx):
            continue
        pair = tuple(sorted(pos for pos, i in enumerate(t_idx)
                            for _ in range(exp[i])))
        rest = rel - GeomPoly._raw(table, {exp: c})
        rules[pair] = (-rest).scaled(c.inverse())
    return rules


def normal_form(f: GeomPoly, pres: Presentation, rules: dict | None = None) -> GeomPoly:
    """Rewrite every monomial of t-degree >= 2 until none remains.

    Each step removes one monomial of t-degree d and inserts monomials of
    t-degree at most d - 1, so the multiset of t-degrees strictly
    decreases and the loop terminates.  The result is the unique S-linear
    combination of 1, t_a, t_b, t_c representing f in the quotient ring.
    """
    if rules is None:
        rules = t_rewrite_rules(pres)
    table = pres.table
    t_idx = [table.index(n) for n in pres.t_names]
    cur = f
    while True:
        target = None
        for exp in cur.terms:
            if sum(exp[i] for i in t_idx) >= 2:
                target = exp
                break
        if target is None:
            return cur
        c = cur.terms[target]
        positions = [pos for pos, i in enumerate(t_idx) if target[i] > 0]
        if target[t_idx[positions[0]]] >= 2:
            pair = (positions[0], positions[0])
        else:
            pair = (positions[0], positions[1])
        try:
            rhs = rules[pair]
        except KeyError:
            raise ValueError(f"no rewrite rule for the t-pair {pair}") from None
        lowered = list(target)
        lowered[t_idx[pair[0]]] -= 1
        lowered[t_idx[pair[1]]] -= 1
        stub = GeomPoly._raw(table, {tuple(lowered): c})
        cur = cur - GeomPoly._raw(table, {target: c}) + stub * rhs


def t_coordinates(f: GeomPoly, pres: Presentation, rules: dict | None = None):
    """Normal form split into its four S-coordinates on 1, t_a, t_b, t_c."""
    nf = normal_form(f, pres, rules)
    table = pres.table
    t_idx = [table.index(n) for n in pres.t_names]
    coords = [GeomPoly.zero(table) for _ in range(4)]
    for exp, c in nf.terms.items():
        carriers = [pos for pos, i in enumerate(t_idx) if exp[i]]
        if not carriers:
            slot, key = 0, exp
        else:
            slot = 1 + carriers[0]
            key = list(exp)
            key[t_idx[carriers[0]]] = 0
            key = tuple(key)
        coords[slot] = coords[slot] + GeomPoly._raw(table, {key: c})
    return tuple(coords)


def jacobian_minors(relations, var_names, size: int, pres: Presentation | None = None):
    """All size x size minors of the Jacobian d(relations)/d(vars).

    Returns ((row indices, column indices), minor) pairs; minors are put
    into normal form when a presentation is supplied.  Subdeterminants are
    memoised across minors, which keeps the full 4x4 scan cheap.
    """
    if size < 1 or size > min(len(relations), len(var_names)):
        raise ValueError("minor size exceeds the Jacobian")
    table = relations[0].table
    jac = [[rel.partial(v) for v in var_names] for rel in relations]
    rules = t_rewrite_rules(pres) if pres is not None else None
    cache: dict = {}

    def det(rows, cols):
        key = (rows, cols)
        got = cache.get(key)
        if got is not None:
            return got
        if len(rows) == 1:
            val = jac[rows[0]][cols[0]]
        else:
            val = GeomPoly.zero(table)
            rest = rows[1:]
            for k in range(len(cols)):
                entry = jac[rows[0]][cols[k]]
                if entry.is_zero():
                    continue
                sub = det(rest, cols[:k] + cols[k + 1:])
                if sub.is_zero():
                    continue
                term = entry * sub
                val = val + (term if k % 2 == 0 else -term)
        cache[key] = val
        return val

    out = []
    for rows in combinations(range(len(relations)), size):
        for cols in combinations(range(len(var_names)), size):
            minor = det(rows, cols)
            if rules is not None:
                minor = normal_form(minor, pres, rules)
            out.append(((rows, cols), minor))
    return out


def _det_fraction(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = None
    for k in range(n):
        e = m[0][k]
        if e.is_zero():
            continue
        sub = [row[:k] + row[k + 1:] for row in m[1:]]
        term = e * _det_fraction(sub)
        if k % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return SFraction.zero(m[0][0].num.table)
    return acc


def _solve_span(basis, target, ring: BaseRingS):
    """Matrix X with basis * X = target over Frac(S), or None."""
    table = ring.table
    nb = len(basis)
    rows = []
    for i in range(8):
        row = [SFraction(v.coords[i]) for v in basis]
        row += [SFraction(v.coords[i]) for v in target]
        rows.append(row)
    pivots = _rref(rows, nb)
    if pivots != list(range(nb)):
        return None
    for i in range(nb, 8):
        if any(not rows[i][nb + j].is_zero() for j in range(len(target))):
            return None
    return [[rows[r][nb + j] for j in range(len(target))] for r in range(nb)]


def verify_presentation(pres: Presentation, ring: BaseRingS, delta) -> list[CheckResult]:
    """Certify a presentation against the derivation kernel.

    Checks, in order: every relation maps to zero in M under the
    embedding; the embedding images are killed by the derivation; the
    computed kernel has rank four and spans the same Frac(S)-subspace as
    the four claimed generators (both change-of-basis determinants are
    nonzero).
    """
    checks = []
    table = pres.table
    for name, rel in pres.relations.items():
        image = rel.substituted(pres.embedding)
        vec = to_module_vector(image, ring)
        checks.append(check(f"relation_vanishes[{name}]", vec.is_zero(),
                            None if vec.is_zero() else f"image={vec}"))
    for gname in pres.generators:
        img = delta(pres.embedding[gname])
        checks.append(check(f"embedding_killed[{gname}]", img.is_zero(),
                            None if img.is_zero() else f"image={img}"))
    mat = derivation_matrix(delta, ring)
    kern = kernel_basis(mat, ring)
    checks.append(check("kernel_rank", len(kern) == 4, f"rank={len(kern)}"))
    claimed = [GeomPoly.one(table)] + [pres.embedding[t] for t in pres.t_names]
    claimed_vecs = [to_module_vector(g, ring) for g in claimed]
    if len(kern) == 4:
        fwd = _solve_span(kern, claimed_vecs, ring)
        det_fwd = _det_fraction(fwd) if fwd is not None else None
        ok_fwd = det_fwd is not None and not det_fwd.is_zero()
        checks.append(check("span_change_of_basis[kernel_to_claimed]", ok_fwd,
                            f"det={det_fwd}" if det_fwd is not None else "unsolvable"))
        rev = _solve_span(claimed_vecs, kern, ring)
        det_rev = _det_fraction(rev) if rev is not None else None
        ok_rev = det_rev is not None and not det_rev.is_zero()
        checks.append(check("span_change_of_basis[claimed_to_kernel]", ok_rev,
                            f"det={det_rev}" if det_rev is not None else "unsolvable"))
    return checks
