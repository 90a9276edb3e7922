"""Framed HOMFLYPT skein of S^3, the annular skein, and brane tensor products.

Relations (``framing_sign`` s = +1 by default)::

    <L+> - <L-> = z <L0>
    <L with framing +1> = a^s <L>
    <L u O> = delta <L>,  delta = (a^s - a^-s) / z,  <empty> = 1

With s = -1 the kink relation forces delta = (a^-1 - a)/z; the unknot
relation is not independent of the other two.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .diagram import ANNULUS, S3, DiagramError, FramedDiagram, _over_in
from .laurent import LaurentPoly, SignatureError

__all__ = [
    "SkeinEvaluator",
    "OracleEvaluator",
    "evaluate_s3",
    "evaluate_zero_framed",
    "oracle_evaluate",
    "check_skein_triple",
    "skein_triples",
    "AnnularSkein",
    "BraneSkein",
    "Brane",
    "tensor",
    "collapse_s3_factor",
    "delta",
    "brane_signature",
]

SIG = ("a", "z")


def delta(framing_sign: int = 1, signature=SIG, avar: str = "a") -> LaurentPoly:
    """Value of a split unknot, (a^s - a^-s) z^-1."""
    return (LaurentPoly.var(avar, framing_sign, signature) - LaurentPoly.var(avar, -framing_sign, signature)) \
        * LaurentPoly.var("z", -1, signature)


# ---------------------------------------------------------------------------
# traversal helpers
# ---------------------------------------------------------------------------

def _traverse(d: FramedDiagram, plan: Sequence[tuple]) -> list:
    """Crossings that are first met on the under-strand, in traversal order.

    ``plan`` is a list of (component index, start edge).
    """
    head, _, nxt = d._tables()
    seen = set()
    bad = []
    for _, start in plan:
        if start not in nxt:
            continue
        e = start
        while True:
            c, slot = head[e]
            if c not in seen:
                seen.add(c)
                if slot == 0:
                    bad.append(c)
            e = nxt[e]
            if e == start:
                break
    return bad


def _greedy_plan(d: FramedDiagram) -> list:
    """Choose component order and basepoints greedily to keep few bad crossings."""
    head, _, nxt = d._tables()
    comps = [cyc for cyc in d.components() if cyc[0] in nxt]
    remaining = set(range(len(comps)))
    seen: set = set()
    plan = []
    while remaining:
        best = None
        for ci in sorted(remaining):
            cyc = comps[ci]
            for start in cyc:
                bad = 0
                local = set()
                e = start
                while True:
                    c, slot = head[e]
                    if c not in seen and c not in local:
                        local.add(c)
                        if slot == 0:
                            bad += 1
                    e = nxt[e]
                    if e == start:
                        break
                if best is None or bad < best[0]:
                    best = (bad, ci, start, local)
                    if bad == 0:
                        break
            if best[0] == 0:
                break
        _, ci, start, local = best
        seen |= local
        plan.append((ci, start))
        remaining.discard(ci)
    return plan


def _self_writhe_total(d: FramedDiagram) -> int:
    comp = d.component_of_edges()
    return sum(c[4] for c in d.crossings if comp[c[0]] == comp[_over_in(c)])


def _faces(d: FramedDiagram) -> list:
    """Faces of the projection as lists of darts (crossing, slot)."""
    occ = {}
    for idx, c in enumerate(d.crossings):
        for p in range(4):
            occ.setdefault(c[p], []).append((idx, p))

    def other(dart):
        a, b = occ[d.crossings[dart[0]][dart[1]]]
        return b if a == dart else a

    seen = set()
    faces = []
    for idx in range(len(d.crossings)):
        for p in range(4):
            if (idx, p) in seen:
                continue
            face = []
            dart = (idx, p)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                c2, q = other(dart)
                dart = (c2, (q + 1) % 4)
            faces.append(face)
    return faces


def _find_reduction(d: FramedDiagram):
    """Return ('R1', cid) or ('R2', (c1, c2)) for a removable kink or bigon, else None."""
    head, tail, _ = d._tables()
    for e, (h, _) in head.items():
        if tail[e][0] == h:
            return ("R1", h)
    for face in _faces(d):
        if len(face) != 2:
            continue
        (c1, p1), (c2, p2) = face
        if c1 == c2:
            continue
        e = d.crossings[c1][p1]
        f = d.crossings[c2][p2]
        # slot parity: 0/2 under, 1/3 over
        e_over = [pp % 2 for (cc, pp) in _occurrences(d, e)]
        f_over = [pp % 2 for (cc, pp) in _occurrences(d, f)]
        if len(set(e_over)) == 1 and len(set(f_over)) == 1 and e_over[0] != f_over[0]:
            if d.crossings[c1][4] != d.crossings[c2][4]:
                return ("R2", (c1, c2))
    return None


def _occurrences(d: FramedDiagram, e: int) -> list:
    return [(idx, p) for idx, c in enumerate(d.crossings) for p in range(4) if c[p] == e]


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

class SkeinEvaluator:
    """Memoized descending-diagram evaluation of framed HOMFLYPT.

    The cache maps canonical codes of connected, reduced, blackboard-framed
    pieces to their values; it persists for the lifetime of the evaluator.
    """

    def __init__(self, framing_sign: int = 1, memo: bool = True, simplify: bool = True, use_numba: bool | None = None):
        if framing_sign not in (1, -1):
            raise ValueError("framing_sign must be +1 or -1")
        self.s = framing_sign
        self.memo = memo
        self.simplify = simplify
        self.use_numba = use_numba
        self.cache: dict = {}
        self.calls = 0
        self._z = LaurentPoly.var("z", 1, SIG)
        self._delta = delta(framing_sign)
        self._apow = {}

    def _a(self, k: int) -> LaurentPoly:
        p = self._apow.get(k)
        if p is None:
            p = LaurentPoly.var("a", self.s * k, SIG)
            self._apow[k] = p
        return p

    def evaluate(self, d: FramedDiagram) -> LaurentPoly:
        if d.ambient != S3:
            raise DiagramError("evaluate_s3 requires an S3 diagram")
        corr = d.total_correction()
        value = self._blackboard(d.blackboard() if corr else d)
        return value * self._a(corr) if corr else value

    __call__ = evaluate

    def zero_framed(self, d: FramedDiagram) -> LaurentPoly:
        """Value with every component 0-framed."""
        return self.evaluate(d.zero_framed())

    def _blackboard(self, d: FramedDiagram) -> LaurentPoly:
        if not d.crossings:
            return self._delta ** len(d.loops) if d.loops else LaurentPoly.one(SIG)
        pieces = d.split_pieces()
        if len(pieces) > 1:
            out = LaurentPoly.one(SIG)
            for p in pieces:
                out = out * self._blackboard(p)
            return out
        return self._piece(d)

    def _piece(self, d: FramedDiagram) -> LaurentPoly:
        self.calls += 1
        factor = 0
        if self.simplify:
            while d.crossings:
                red = _find_reduction(d)
                if red is None:
                    break
                kind, where = red
                if kind == "R1":
                    factor += d.crossings[where][4]
                    d = d.remove_crossings_straight([where])
                else:
                    d = d.remove_crossings_straight(list(where))
                if len(d.split_pieces()) > 1 or not d.crossings:
                    return self._blackboard(d) * self._a(factor)
        key = None
        if self.memo:
            key = d.canonical_code(include_framing=False, use_numba=self.use_numba)
            hit = self.cache.get(key)
            if hit is not None:
                return hit * self._a(factor) if factor else hit
        plan = _greedy_plan(d)
        bad = _traverse(d, plan)
        if not bad:
            val = self._a(_self_writhe_total(d)) * self._delta ** d.n_components
        else:
            c = bad[0]
            eps = d.crossings[c][4]
            val = self._blackboard(d.switch_crossing(c))
            smooth = self._blackboard(d.smooth_crossing(c)) * self._z
            val = val + smooth if eps > 0 else val - smooth
        if key is not None:
            self.cache[key] = val
        return val * self._a(factor) if factor else val


class OracleEvaluator:
    """Exhaustive resolution tree: no cache, no simplification, random choices.

    At each node a random component order and random basepoints are drawn, and
    the bad crossings are expanded in a random order by the telescoping sum
    ``<D> = <D_desc> + sum_i eps_i z <D_i>`` where ``D_i`` switches the first
    i-1 expanded crossings and smooths the i-th.
    """

    def __init__(self, framing_sign: int = 1, seed: int | None = 0):
        self.s = framing_sign
        self.rng = random.Random(seed)
        self.nodes = 0
        self._z = LaurentPoly.var("z", 1, SIG)
        self._delta = delta(framing_sign)

    def evaluate(self, d: FramedDiagram) -> LaurentPoly:
        if d.ambient != S3:
            raise DiagramError("evaluate_s3 requires an S3 diagram")
        corr = d.total_correction()
        return self._node(d.blackboard()) * LaurentPoly.var("a", self.s * corr, SIG)

    __call__ = evaluate

    def _base(self, d: FramedDiagram) -> LaurentPoly:
        return LaurentPoly.var("a", self.s * _self_writhe_total(d), SIG) * self._delta ** d.n_components

    def _node(self, d: FramedDiagram) -> LaurentPoly:
        self.nodes += 1
        if not d.crossings:
            return self._base(d)
        _, _, nxt = d._tables()
        comps = [cyc for cyc in d.components() if cyc[0] in nxt]
        order = list(range(len(comps)))
        self.rng.shuffle(order)
        plan = [(ci, self.rng.choice(comps[ci])) for ci in order]
        bad = _traverse(d, plan)
        self.rng.shuffle(bad)
        total = LaurentPoly.zero(SIG)
        cur = d
        for c in bad:
            eps = cur.crossings[c][4]
            term = self._node(cur.smooth_crossing(c)) * self._z
            total = total + term if eps > 0 else total - term
            cur = cur.switch_crossing(c)
        return total + self._base(cur)


_DEFAULT = {}


def _default_evaluator(framing_sign: int = 1) -> SkeinEvaluator:
    ev = _DEFAULT.get(framing_sign)
    if ev is None:
        ev = SkeinEvaluator(framing_sign)
        _DEFAULT[framing_sign] = ev
    return ev


def evaluate_s3(d: FramedDiagram, framing_sign: int = 1, evaluator: SkeinEvaluator | None = None) -> LaurentPoly:
    """<d> in Z[a^+-1, z^+-1] using a shared memoizing evaluator."""
    ev = evaluator or _default_evaluator(framing_sign)
    return ev.evaluate(d)


def evaluate_zero_framed(d: FramedDiagram, framing_sign: int = 1) -> LaurentPoly:
    return evaluate_s3(d.zero_framed(), framing_sign)


def oracle_evaluate(d: FramedDiagram, framing_sign: int = 1, seed: int | None = 0) -> LaurentPoly:
    return OracleEvaluator(framing_sign, seed).evaluate(d)


def check_skein_triple(d_plus: FramedDiagram, d_minus: FramedDiagram, d_zero: FramedDiagram,
                       framing_sign: int = 1, evaluator: SkeinEvaluator | None = None) -> bool:
    """True iff <d+> - <d-> = z <d0>.

    ``d_plus`` and ``d_minus`` must agree except at one crossing id, positive in
    ``d_plus`` and switched in ``d_minus``; ``d_zero`` must have one crossing
    fewer.  Anything else raises :class:`DiagramError`.
    """
    if len(d_plus.crossings) != len(d_minus.crossings):
        raise DiagramError("L+ and L- must have the same crossings")
    diff = [i for i, (p, m) in enumerate(zip(d_plus.crossings, d_minus.crossings)) if p != m]
    if len(diff) != 1:
        raise DiagramError(f"L+ and L- must differ at exactly one crossing (found {len(diff)})")
    cid = diff[0]
    if d_plus.crossings[cid][4] != 1 or d_plus.switch_crossing(cid).crossings != d_minus.crossings:
        raise DiagramError("the differing crossing is not a positive/negative pair")
    if len(d_zero.crossings) != len(d_plus.crossings) - 1:
        raise DiagramError("L0 must have one crossing fewer than L+")
    ev = evaluator or _default_evaluator(framing_sign)
    z = LaurentPoly.var("z", 1, SIG)
    return (ev.evaluate(d_plus) - ev.evaluate(d_minus) - z * ev.evaluate(d_zero)).is_zero()


def skein_triples(d: FramedDiagram):
    """Yield (cid, L+, L-, L0) for every crossing of ``d``."""
    for cid, c in enumerate(d.crossings):
        other = d.switch_crossing(cid)
        zero = d.smooth_crossing(cid)
        if c[4] > 0:
            yield cid, d, other, zero
        else:
            yield cid, other, d, zero


# ---------------------------------------------------------------------------
# annular skein
# ---------------------------------------------------------------------------

def _mono(gens) -> tuple:
    """Normalize generators (iterable of ints or (i, mult) pairs) to a sorted multiset."""
    counts = {}
    for g in gens:
        if isinstance(g, tuple):
            i, m = g
        else:
            i, m = g, 1
        counts[int(i)] = counts.get(int(i), 0) + int(m)
    return tuple(sorted((i, m) for i, m in counts.items() if m))


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    return _mono(list(m1) + list(m2))


def _gen_name(i: int) -> str:
    return f"l{i}" if i >= 0 else f"l({i})"


def _mono_render(m: tuple) -> str:
    return "*".join(_gen_name(i) if k == 1 else f"{_gen_name(i)}^{k}" for i, k in m)


def _coeff_render(c: LaurentPoly) -> str:
    text = c.render()
    return f"({text})" if len(c) > 1 else text


class AnnularSkein:
    """Element of the solid-torus skein: polynomial in commuting generators l_i."""

    __slots__ = ("signature", "terms")

    def __init__(self, terms: Mapping[tuple, LaurentPoly] | None = None, signature=SIG):
        self.signature = tuple(signature)
        clean = {}
        for m, c in (terms or {}).items():
            m = _mono(m)
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.constant(c, self.signature)
            if c.signature != self.signature:
                raise SignatureError("coefficient signature mismatch")
            clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: c for m, c in sorted(clean.items()) if not c.is_zero()}

    @classmethod
    def generator(cls, i: int, signature=SIG) -> "AnnularSkein":
        return cls({((i, 1),): LaurentPoly.one(signature)}, signature)

    @classmethod
    def one(cls, signature=SIG) -> "AnnularSkein":
        return cls({(): LaurentPoly.one(signature)}, signature)

    @classmethod
    def monomial(cls, gens: Iterable, coeff=None, signature=SIG) -> "AnnularSkein":
        c = coeff if coeff is not None else LaurentPoly.one(signature)
        return cls({_mono(gens): c}, signature)

    def _check(self, other):
        if other.signature != self.signature:
            raise SignatureError("annular skein signature mismatch")

    def __add__(self, other: "AnnularSkein") -> "AnnularSkein":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return AnnularSkein(t, self.signature)

    def __neg__(self):
        return AnnularSkein({m: -c for m, c in self.terms.items()}, self.signature)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return AnnularSkein({m: c * other for m, c in self.terms.items()}, self.signature)
        self._check(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                p = c1 * c2
                t[m] = t[m] + p if m in t else p
        return AnnularSkein(t, self.signature)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AnnularSkein):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __hash__(self):
        return hash((self.signature, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def grades(self) -> set:
        return {sum(i * k for i, k in m) for m in self.terms}

    def grade(self) -> int:
        g = self.grades()
        if len(g) != 1:
            raise ValueError("grade is only defined for nonzero homogeneous elements")
        return next(iter(g))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            if not m:
                parts.append(c.render())
            elif c == 1:
                parts.append(_mono_render(m))
            else:
                parts.append(f"{_coeff_render(c)} * {_mono_render(m)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AnnularSkein({self.render()!r})"


def annular_mul(x: AnnularSkein, y: AnnularSkein) -> AnnularSkein:
    return x * y


def annular_grade(x: AnnularSkein) -> int:
    return x.grade()


# ---------------------------------------------------------------------------
# brane tensor products
# ---------------------------------------------------------------------------

class Brane(tuple):
    """(name, ambient) pair; ambient is 'S3' or 'SolidTorus'."""

    def __new__(cls, name: str, ambient: str):
        if ambient not in (S3, "SolidTorus"):
            raise ValueError(f"unknown brane ambient {ambient!r}")
        return super().__new__(cls, (name, ambient))

    @property
    def name(self):
        return self[0]

    @property
    def ambient(self):
        return self[1]


def brane_signature(branes: Sequence) -> tuple:
    """Variables: 'a' for the first S3 brane, 'b1', ... for further S3 branes,
    'a1'..'ak' for solid-torus branes in order, then 'z'."""
    names = []
    n_s3 = 0
    n_st = 0
    for b in branes:
        if b[1] == S3:
            names.append("a" if n_s3 == 0 else f"b{n_s3}")
            n_s3 += 1
        else:
            n_st += 1
            names.append(f"a{n_st}")
    return tuple(names) + ("z",)


EMPTY = ("S3", (), 0, ())  # canonical code of the empty diagram


class BraneSkein:
    """Element of the tensor product of per-brane skeins over Z[z^+-1].

    Keys are tuples of per-brane factor keys: an S3 factor is the canonical
    code of a blackboard-framed diagram (framing corrections moved into the
    coefficient), a solid-torus factor is a sorted generator multiset.
    """

    def __init__(self, branes: Sequence, terms=None, reps=None, framing_sign: int = 1, signature=None):
        self.branes = tuple(Brane(*b) for b in branes)
        base = brane_signature(self.branes)
        if signature is None:
            signature = base
        elif not set(base) <= set(signature):
            raise SignatureError(f"signature {signature} lacks brane variables {base}")
        self.signature = tuple(signature)
        self.framing_sign = framing_sign
        self.reps = dict(reps or {})
        clean = {}
        for k, c in (terms or {}).items():
            if len(k) != len(self.branes):
                raise ValueError("tensor key does not match the brane list")
            if c.signature != self.signature:
                raise SignatureError(f"coefficient signature {c.signature} != {self.signature}")
            clean[k] = clean[k] + c if k in clean else c
        self.terms = {k: c for k, c in sorted(clean.items(), key=lambda kv: repr(kv[0])) if not c.is_zero()}

    @property
    def avars(self) -> tuple:
        return self.signature[:-1]

    def zero(self) -> "BraneSkein":
        return BraneSkein(self.branes, {}, {}, self.framing_sign, self.signature)

    def unit(self) -> "BraneSkein":
        key = tuple(EMPTY if b.ambient == S3 else () for b in self.branes)
        return BraneSkein(self.branes, {key: LaurentPoly.one(self.signature)}, {}, self.framing_sign, self.signature)

    def _check(self, other: "BraneSkein"):
        if self.branes != other.branes:
            raise ValueError("brane lists differ")
        if self.signature != other.signature:
            raise SignatureError("coefficient signatures differ")
        if self.framing_sign != other.framing_sign:
            raise ValueError("framing conventions differ")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        reps = dict(self.reps)
        reps.update(other.reps)
        return BraneSkein(self.branes, t, reps, self.framing_sign, self.signature)

    __radd__ = __add__

    def __neg__(self):
        return BraneSkein(self.branes, {k: -c for k, c in self.terms.items()}, self.reps, self.framing_sign, self.signature)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Scalar multiplication; products of skein elements are only defined
        after every S3 factor has been collapsed to the empty link."""
        if isinstance(other, (int, LaurentPoly)):
            if isinstance(other, LaurentPoly) and other.signature != self.signature:
                other = other.extend(self.signature)
            return BraneSkein(self.branes, {k: c * other for k, c in self.terms.items()}, self.reps, self.framing_sign, self.signature)
        if isinstance(other, BraneSkein):
            self._check(other)
            t = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    key = []
                    for b, f1, f2 in zip(self.branes, k1, k2):
                        if b.ambient == S3:
                            if f1 != EMPTY and f2 != EMPTY:
                                raise ValueError("product of two nonempty S3 factors needs a collapse first")
                            key.append(f2 if f1 == EMPTY else f1)
                        else:
                            key.append(_mono_mul(f1, f2))
                    key = tuple(key)
                    p = c1 * c2
                    t[key] = t[key] + p if key in t else p
            reps = dict(self.reps)
            reps.update(other.reps)
            return BraneSkein(self.branes, t, reps, self.framing_sign, self.signature)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BraneSkein):
            return NotImplemented
        return self.branes == other.branes and self.terms == other.terms

    def __hash__(self):
        return hash((self.branes, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def extend(self, signature) -> "BraneSkein":
        """Same element with coefficients embedded in a larger signature."""
        signature = tuple(signature)
        return BraneSkein(self.branes, {k: c.extend(signature) for k, c in self.terms.items()},
                          self.reps, self.framing_sign, signature)

    def drop_branes(self, names) -> "BraneSkein":
        """Forget branes whose factor is trivial in every term (keeps the signature)."""
        names = set(names)
        keep = [i for i, b in enumerate(self.branes) if b.name not in names]
        t = {}
        for k, c in self.terms.items():
            for i, b in enumerate(self.branes):
                if b.name in names and k[i] not in (EMPTY, ()):
                    raise ValueError(f"brane {b.name} carries a nontrivial factor")
            key = tuple(k[i] for i in keep)
            t[key] = t[key] + c if key in t else c
        return BraneSkein([self.branes[i] for i in keep], t, self.reps, self.framing_sign, self.signature)

    def has_s3_content(self) -> bool:
        return any(f != EMPTY for k in self.terms for b, f in zip(self.branes, k) if b.ambient == S3)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        n_st = sum(1 for b in self.branes if b.ambient != S3)
        for k, c in self.terms.items():
            factors = []
            for b, f in zip(self.branes, k):
                if b.ambient == S3:
                    if f != EMPTY:
                        factors.append("{" + self.reps[f].render() + "}")
                elif n_st > 1:
                    factors.append(_mono_render(f) if f else "1")
                elif f:
                    factors.append(_mono_render(f))
            st_parts = factors[len([f for f in factors if f.startswith("{")]):]
            if n_st > 1 and all(x == "1" for x in st_parts):
                factors = factors[:len(factors) - len(st_parts)]
            body = " (x) ".join(factors)
            if not body:
                parts.append(c.render())
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{_coeff_render(c)} * {body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"BraneSkein({self.render()!r})"


def _as_diagram(x) -> FramedDiagram:
    if x is None:
        return FramedDiagram()
    if isinstance(x, FramedDiagram):
        return x
    if isinstance(x, str):
        from .diagram import parse_diagram
        return parse_diagram(x)
    raise TypeError(f"cannot use {type(x).__name__} as an S3 factor")


def tensor(branes: Sequence, parts: Sequence, framing_sign: int = 1, coeff: LaurentPoly | None = None) -> BraneSkein:
    """Tensor product of per-brane classes.

    S3 parts are diagrams (or diagram text, or None for the empty link);
    solid-torus parts are :class:`AnnularSkein` elements, generator lists, or
    dicts ``{'winding': [...], 'unknots': n}`` whose contractible unknots are
    evaluated to (a_j^s - a_j^-s)/z.
    """
    branes = tuple(Brane(*b) for b in branes)
    if len(parts) != len(branes):
        raise ValueError(f"expected {len(branes)} tensor factors, got {len(parts)}")
    sig = brane_signature(branes)
    base = coeff.extend(sig) if coeff is not None else LaurentPoly.one(sig)
    # each factor expands into a list of (key, coefficient)
    expansions = []
    reps = {}
    for b, avar, part in zip(branes, sig, parts):
        if b.ambient == S3:
            d = _as_diagram(part)
            if d.ambient != S3:
                raise DiagramError(f"brane {b.name} needs an S3 diagram")
            corr = d.total_correction()
            bb = d.blackboard()
            key = bb.canonical_code(include_framing=False)
            reps.setdefault(key, bb)
            expansions.append([(key, LaurentPoly.var(avar, framing_sign * corr, sig))])
        else:
            if isinstance(part, AnnularSkein):
                items = []
                for m, c in part.terms.items():
                    items.append((m, _rename_a(c, avar, sig)))
                expansions.append(items)
            else:
                unknots = 0
                fr = 0
                if isinstance(part, dict):
                    gens = part.get("winding", [])
                    unknots = int(part.get("unknots", 0))
                    fr = int(part.get("framing", 0))
                elif part is None:
                    gens = []
                else:
                    gens = list(part)
                c = delta(framing_sign, sig, avar) ** unknots if unknots else LaurentPoly.one(sig)
                if fr:
                    c = c * LaurentPoly.var(avar, framing_sign * fr, sig)
                expansions.append([(_mono(gens), c)])
    terms = {(): base}
    for items in expansions:
        nxt = {}
        for k, c in terms.items():
            for f, cf in items:
                key = k + (f,)
                p = c * cf
                nxt[key] = nxt[key] + p if key in nxt else p
        terms = nxt
    return BraneSkein(branes, terms, reps, framing_sign)


def _rename_a(c: LaurentPoly, avar: str, sig: tuple) -> LaurentPoly:
    """Move a coefficient written in ('a','z') onto brane variable ``avar``."""
    if c.signature == sig:
        return c
    extra = [v for v in c.signature if v not in ("a", "z")]
    if extra:
        raise SignatureError(f"annular coefficient uses unexpected variables {extra}")
    return c.substitute_monomial({"a": {avar: 1}, "z": {"z": 1}}, sig)


def collapse_s3_factor(b: BraneSkein, evaluator: SkeinEvaluator | None = None) -> BraneSkein:
    """Replace every S3 factor K by <K> times the empty link."""
    ev = evaluator or _default_evaluator(b.framing_sign)
    s3_idx = [i for i, br in enumerate(b.branes) if br.ambient == S3]
    if not s3_idx:
        return b
    sig = b.signature
    avars = brane_signature(b.branes)
    values = {}
    t = {}
    for k, c in b.terms.items():
        coeff = c
        key = list(k)
        for i in s3_idx:
            f = k[i]
            if f == EMPTY:
                continue
            if f not in values:
                values[f] = ev.evaluate(b.reps[f])
            coeff = coeff * _rename_a(values[f], avars[i], sig)
            key[i] = EMPTY
        key = tuple(key)
        t[key] = t[key] + coeff if key in t else coeff
    return BraneSkein(b.branes, t, {}, b.framing_sign, b.signature)
