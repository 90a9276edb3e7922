"""Skein-valued curve counts assembled from moduli records, and wall events.

A record stands for one rigid curve u: its Euler characteristic, rational
weight, orientation sign, linking with each brane, degree class and boundary
class per brane.  The assembled count in class d is

    sum_u  w(u) z^-chi(u) prod_j a_j^(u.L_j)  (boundary of u in each brane)

The engine never solves for curves; records are inputs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .diagram import S3, DiagramError, FramedDiagram, ParseError, parse_diagram
from .laurent import LaurentPoly, QSeries
from .skein import (
    EMPTY,
    Brane,
    BraneSkein,
    SkeinEvaluator,
    brane_signature,
    collapse_s3_factor,
    tensor,
)

__all__ = [
    "AnnularBoundary",
    "CurveRecord",
    "ModuliSet",
    "WallEvent",
    "ModuliError",
    "assemble",
    "assemble_all",
    "homfly_count",
    "partition_function",
    "conifold_substitute",
    "reduced_invariant",
    "apply_wall_event",
    "collapsed_invariant",
    "single_cylinder_moduli",
    "moduli_from_polynomial",
    "disjoint_union_moduli",
    "random_moduli",
    "random_wall_event",
    "SOLID_TORUS",
]

SOLID_TORUS = "SolidTorus"


class ModuliError(ValueError):
    """Schema or consistency problem in moduli data."""


@dataclass(frozen=True)
class AnnularBoundary:
    """Boundary class in a solid-torus brane: generators l_i by winding,
    contractible unknots, and a framing correction."""

    winding: tuple = ()
    unknots: int = 0
    framing: int = 0

    def __post_init__(self):
        object.__setattr__(self, "winding", tuple(sorted(int(x) for x in self.winding)))

    def as_part(self) -> dict:
        return {"winding": list(self.winding), "unknots": self.unknots, "framing": self.framing}

    def key(self) -> tuple:
        return (self.winding, self.unknots, self.framing)

    def to_json(self):
        if not self.unknots and not self.framing:
            return list(self.winding)
        return self.as_part()

    @classmethod
    def from_json(cls, data) -> "AnnularBoundary":
        if data is None:
            return cls()
        if isinstance(data, list):
            return cls(tuple(int(x) for x in data))
        if isinstance(data, dict):
            return cls(tuple(int(x) for x in data.get("winding", [])), int(data.get("unknots", 0)),
                       int(data.get("framing", 0)))
        raise ModuliError(f"bad annular boundary {data!r}")


def _boundary_key(b):
    if isinstance(b, FramedDiagram):
        return ("S3", b.canonical_code(include_framing=True))
    return ("ST", b.key())


@dataclass(frozen=True)
class CurveRecord:
    chi: int
    weight: Fraction = Fraction(1)
    sign: int = 1
    linking: tuple = ()
    deg: Fraction | None = None
    d: tuple = ()
    boundary: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        object.__setattr__(self, "linking", tuple(int(x) for x in self.linking))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if self.deg is not None:
            object.__setattr__(self, "deg", Fraction(self.deg))
        if self.sign not in (1, -1):
            raise ModuliError(f"orientation sign must be +1 or -1, got {self.sign}")

    def key(self) -> tuple:
        """Identity of the record up to its weight (used for merging)."""
        return (self.chi, self.sign, self.linking, self.deg, self.d, tuple(_boundary_key(b) for b in self.boundary))


@dataclass(frozen=True)
class ModuliSet:
    branes: tuple
    records: tuple = ()
    order: int = 4

    def __post_init__(self):
        object.__setattr__(self, "branes", tuple(Brane(*b) for b in self.branes))
        object.__setattr__(self, "records", tuple(self.records))
        nb = len(self.branes)
        for idx, r in enumerate(self.records):
            if len(r.linking) != nb or len(r.boundary) != nb:
                raise ModuliError(f"record {idx} does not match the brane list ({nb} branes)")
            for b, part in zip(self.branes, r.boundary):
                if b.ambient == S3 and not isinstance(part, FramedDiagram):
                    raise ModuliError(f"record {idx}: brane {b.name} needs a diagram boundary")
                if b.ambient != S3 and not isinstance(part, AnnularBoundary):
                    raise ModuliError(f"record {idx}: brane {b.name} needs an annular boundary")

    @property
    def signature(self) -> tuple:
        return brane_signature(self.branes)

    def classes(self) -> list:
        return sorted({r.d for r in self.records})

    def with_records(self, records) -> "ModuliSet":
        return ModuliSet(self.branes, tuple(records), self.order)

    def merged(self) -> "ModuliSet":
        """Combine records that differ only in weight; drop zero weights."""
        acc = {}
        first = {}
        for r in self.records:
            k = r.key()
            acc[k] = acc.get(k, Fraction(0)) + r.weight
            first.setdefault(k, r)
        out = [replace(first[k], weight=w) for k, w in acc.items() if w]
        return self.with_records(out)

    def scaled(self, c) -> "ModuliSet":
        return self.with_records([replace(r, weight=r.weight * Fraction(c)) for r in self.records])

    def union(self, other: "ModuliSet") -> "ModuliSet":
        if self.branes != other.branes:
            raise ModuliError("brane lists differ")
        return ModuliSet(self.branes, self.records + other.records, min(self.order, other.order))

    # -- json ---------------------------------------------------------------
    def to_json(self) -> dict:
        recs = []
        for r in self.records:
            bd = []
            for b, part in zip(self.branes, r.boundary):
                if b.ambient == S3:
                    bd.append(None if part.is_empty() and not part.edge_framing else part.render())
                else:
                    bd.append(part.to_json())
            item = {
                "chi": r.chi,
                "weight": [r.weight.numerator, r.weight.denominator],
                "sign": r.sign,
                "linking": list(r.linking),
                "class": list(r.d),
                "boundary": bd,
            }
            if r.deg is not None:
                item["deg"] = r.deg.numerator if r.deg.denominator == 1 else str(r.deg)
            recs.append(item)
        return {"branes": [{"name": b.name, "ambient": b.ambient} for b in self.branes],
                "order": self.order, "records": recs}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data) -> "ModuliSet":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ModuliError(f"invalid JSON: {exc}") from exc
        problems = []
        if not isinstance(data, dict):
            raise ModuliError("moduli JSON must be an object")
        try:
            branes = [Brane(b["name"], b.get("ambient", S3)) for b in data.get("branes", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ModuliError(f"branes: {exc}") from exc
        records = []
        for idx, rd in enumerate(data.get("records", [])):
            try:
                records.append(_record_from_json(rd, branes))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                problems.append(f"records[{idx}]: {exc}")
        if problems:
            raise ModuliError("; ".join(problems))
        order = int(data.get("order", max([sum(r.d) for r in records] + [4])))
        return cls(tuple(branes), tuple(records), order)


def _parse_fraction(x) -> Fraction:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"fraction must be [num, den], got {x}")
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise ValueError("floating point weights are not accepted; use [num, den]")
    return Fraction(int(x))


RECORD_KEYS = frozenset({"chi", "weight", "sign", "linking", "deg", "class", "boundary"})


def _record_from_json(rd: dict, branes) -> CurveRecord:
    extra = set(rd) - RECORD_KEYS
    if extra:
        raise ValueError(f"unknown field(s) {sorted(extra)}")
    nb = len(branes)
    linking = rd.get("linking", [0] * nb)
    bd_raw = rd.get("boundary", [None] * nb)
    if len(linking) != nb:
        raise ValueError(f"linking has {len(linking)} entries for {nb} branes")
    if len(bd_raw) != nb:
        raise ValueError(f"boundary has {len(bd_raw)} entries for {nb} branes")
    bd = []
    for b, part in zip(branes, bd_raw):
        if b.ambient == S3:
            if part is None:
                bd.append(FramedDiagram())
            elif isinstance(part, dict):
                bd.append(FramedDiagram.from_json(part))
            else:
                try:
                    bd.append(parse_diagram(str(part)))
                except (ParseError, DiagramError) as exc:
                    raise ValueError(f"boundary on {b.name}: {exc}") from exc
        else:
            bd.append(AnnularBoundary.from_json(part))
    sign = rd.get("sign", 1)
    if sign in ("+", "-"):
        sign = 1 if sign == "+" else -1
    deg = rd.get("deg")
    return CurveRecord(
        chi=int(rd["chi"]),
        weight=_parse_fraction(rd.get("weight", 1)),
        sign=int(sign),
        linking=tuple(int(x) for x in linking),
        deg=None if deg is None else _parse_fraction(deg),
        d=tuple(int(x) for x in rd.get("class", [0])),
        boundary=tuple(bd),
    )


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def _record_term(m: ModuliSet, r: CurveRecord, framing_sign: int) -> BraneSkein:
    sig = m.signature
    exps = {"z": -r.chi}
    for v, l in zip(sig[:-1], r.linking):
        exps[v] = exps.get(v, 0) + l
    coeff = LaurentPoly.monomial(exps, r.weight, sig)
    parts = [p if b.ambient == S3 else p.as_part() for b, p in zip(m.branes, r.boundary)]
    return tensor(m.branes, parts, framing_sign, coeff)


def assemble(m: ModuliSet, d=None, framing_sign: int = 1) -> BraneSkein:
    """Skein-valued count in class ``d`` (all records when ``d`` is None)."""
    total = BraneSkein(m.branes, {}, {}, framing_sign)
    want = None if d is None else tuple(d)
    for r in m.records:
        if want is not None and r.d != want:
            continue
        total = total + _record_term(m, r, framing_sign)
    return total


def assemble_all(m: ModuliSet, framing_sign: int = 1) -> dict:
    return {d: assemble(m, d, framing_sign) for d in m.classes()}


def collapsed_invariant(m: ModuliSet, framing_sign: int = 1, evaluator: SkeinEvaluator | None = None) -> dict:
    """Class -> assembled count with every S3 factor evaluated; zero classes dropped."""
    out = {}
    for d, b in assemble_all(m, framing_sign).items():
        c = collapse_s3_factor(b, evaluator)
        if not c.is_zero():
            out[d] = c
    return out


def homfly_count(m: ModuliSet) -> LaurentPoly:
    """sum_u sign(u) a^(2 deg u) z^-chi(u), with deg in (1/2)Z."""
    sig = ("a", "z")
    total = LaurentPoly.zero(sig)
    for idx, r in enumerate(m.records):
        if r.deg is None:
            raise ModuliError(f"record {idx} has no deg field")
        two = 2 * r.deg
        if two.denominator != 1:
            raise ModuliError(f"record {idx}: 2*deg = {two} is not an integer")
        total = total + LaurentPoly.monomial({"a": int(two), "z": -r.chi}, r.sign * r.weight, sig)
    return total


def moduli_from_polynomial(p: LaurentPoly) -> ModuliSet:
    """Records realizing a polynomial in (a, z) in the sign/deg form (no branes)."""
    recs = []
    ai, zi = p.signature.index("a"), p.signature.index("z")
    for mono, c in p.items():
        if Fraction(c).denominator != 1:
            raise ModuliError("integer coefficients required")
        for _ in range(abs(int(c))):
            recs.append(CurveRecord(chi=-mono[zi], sign=1 if c > 0 else -1, deg=Fraction(mono[ai], 2)))
    return ModuliSet((), tuple(recs), 0)


def partition_function(m: ModuliSet, order: int | None = None, framing_sign: int = 1) -> QSeries:
    """1 + sum_{d>0} assemble(m, d) Q^d truncated at total degree ``order``.

    Records in the zero class are added to the constant term.
    """
    order = m.order if order is None else order
    unit = BraneSkein(m.branes, {}, {}, framing_sign).unit()
    nv = len(m.classes()[0]) if m.records else 1
    coeffs = {(0,) * nv: unit}
    for d, b in assemble_all(m, framing_sign).items():
        if len(d) != nv:
            raise ModuliError("records mix degree classes of different arity")
        if any(x < 0 for x in d):
            raise ModuliError(f"negative degree class {d}")
        if sum(d) > order:
            continue
        coeffs[d] = coeffs[d] + b if d in coeffs else b
    return QSeries(coeffs, order, unit, nv)


def conifold_substitute(s: QSeries, avar: str = "a") -> BraneSkein:
    """Set Q = avar^2 in a single-variable series of brane skeins."""
    if s.nvars != 1:
        raise ModuliError("conifold substitution needs a single Q variable")
    unit = s.one
    sig = unit.signature
    if avar not in sig:
        sig = (avar,) + sig
    total = unit.extend(sig).zero()
    for (d,), c in s.coeffs.items():
        c = c.extend(sig)
        total = total + c * LaurentPoly.var(avar, 2 * d, sig)
    return total


def reduced_invariant(z_xl: QSeries, z_x: QSeries) -> QSeries:
    """Z_{X,L} / Z_X by truncated series division (constant term of Z_X must be 1)."""
    if not (z_x.constant == z_x.one):
        raise ZeroDivisionError("closed partition function must have constant term 1")
    return z_xl / z_x


def disjoint_union_moduli(closed: ModuliSet, opened: ModuliSet) -> ModuliSet:
    """Moduli of curves with at most one closed and at most one open piece.

    The product records realize Z_closed * Z_open when both have constant term
    1 and the closed records have empty boundary.
    """
    if closed.branes != opened.branes:
        raise ModuliError("brane lists differ")
    order = min(closed.order, opened.order)
    recs = list(closed.records) + list(opened.records)
    for c in closed.records:
        if any(not (p.is_empty() if isinstance(p, FramedDiagram) else p == AnnularBoundary()) for p in c.boundary):
            raise ModuliError("closed records must have empty boundary")
        for o in opened.records:
            d = tuple(x + y for x, y in zip(c.d, o.d))
            if sum(d) > order:
                continue
            recs.append(CurveRecord(
                chi=c.chi + o.chi, weight=c.weight * o.weight, sign=c.sign * o.sign,
                linking=tuple(x + y for x, y in zip(c.linking, o.linking)),
                deg=None, d=d, boundary=o.boundary))
    return ModuliSet(closed.branes, tuple(recs), order)


# ---------------------------------------------------------------------------
# wall events
# ---------------------------------------------------------------------------

KINDS = ("Hyperbolic", "Elliptic", "FramingChange")


@dataclass(frozen=True)
class WallEvent:
    """A codimension-one event.

    site keys: ``record`` (index), ``brane`` (index), and ``crossing`` for
    Hyperbolic or ``component`` for FramingChange.  ``direction`` is +1 or -1.
    """

    kind: str
    site: dict = field(default_factory=dict)
    direction: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModuliError(f"unknown wall event kind {self.kind!r}")
        if self.direction not in (1, -1):
            raise ModuliError("direction must be +1 or -1")
        need = {"Hyperbolic": ("record", "brane", "crossing"), "Elliptic": ("record", "brane"),
                "FramingChange": ("record", "brane", "component")}[self.kind]
        missing = [k for k in need if k not in self.site]
        if missing:
            raise ModuliError(f"{self.kind} event needs site keys {missing}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": dict(self.site), "direction": self.direction}

    @classmethod
    def from_json(cls, data) -> "WallEvent":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["kind"], dict(data.get("site", {})), int(data.get("direction", 1)))
        except (KeyError, TypeError) as exc:
            raise ModuliError(f"bad wall event: {exc}") from exc


def _site(m: ModuliSet, e: WallEvent):
    ri, bi = int(e.site["record"]), int(e.site["brane"])
    if not 0 <= ri < len(m.records):
        raise ModuliError(f"event site: no record {ri}")
    if not 0 <= bi < len(m.branes):
        raise ModuliError(f"event site: no brane {bi}")
    return ri, bi, m.records[ri]


def _set(t: tuple, i: int, v) -> tuple:
    lst = list(t)
    lst[i] = v
    return tuple(lst)


def apply_wall_event(m: ModuliSet, e: WallEvent, framing_sign: int = 1) -> ModuliSet:
    """Moduli after crossing the wall (records merged, zero weights dropped)."""
    ri, bi, r = _site(m, e)
    brane = m.branes[bi]
    recs = list(m.records)
    s = framing_sign
    if e.kind == "Hyperbolic":
        if brane.ambient != S3:
            raise ModuliError("hyperbolic events act on S3 boundary diagrams")
        D = r.boundary[bi]
        cid = int(e.site["crossing"])
        if not 0 <= cid < D.n_crossings:
            raise ModuliError(f"event site: boundary has no crossing {cid}")
        eps = D.crossings[cid][4]
        # D = switch(D) + eps z smooth(D): the smoothed curve has chi - 1
        recs[ri] = replace(r, boundary=_set(r.boundary, bi, D.switch_crossing(cid)))
        recs.append(replace(r, chi=r.chi - 1, weight=eps * r.weight,
                            boundary=_set(r.boundary, bi, D.smooth_crossing(cid))))
    elif e.kind == "Elliptic":
        d = e.direction
        link = r.linking[bi]
        recs[ri] = replace(r, linking=_set(r.linking, bi, link + 2 * d))
        part = r.boundary[bi]
        if brane.ambient == S3:
            unk = part.split_union(FramedDiagram((), (1,)))
        else:
            unk = replace(part, unknots=part.unknots + 1)
        recs.append(replace(r, chi=r.chi - 1, weight=-s * d * r.weight,
                            linking=_set(r.linking, bi, link + d), boundary=_set(r.boundary, bi, unk)))
    else:
        d = e.direction
        k = int(e.site["component"])
        part = r.boundary[bi]
        if brane.ambient == S3:
            if not 0 <= k < part.n_components:
                raise ModuliError(f"event site: boundary has no component {k}")
            new = part.with_framing_change(k, d)
        else:
            new = replace(part, framing=part.framing + d)
        recs[ri] = replace(r, boundary=_set(r.boundary, bi, new),
                           linking=_set(r.linking, bi, r.linking[bi] - s * d))
    return m.with_records(recs).merged()


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def single_cylinder_moduli(K: FramedDiagram, order: int = 1) -> ModuliSet:
    """One chi=0, weight-1, linking-0 cylinder per component of K.

    Branes: the S3 brane carrying K and one solid-torus brane per component,
    each met once by the longitude l_1.
    """
    n = K.n_components
    branes = [Brane("L", S3)] + [Brane(f"L_K{i + 1}", SOLID_TORUS) for i in range(n)]
    rec = CurveRecord(chi=0, weight=Fraction(1), sign=1, linking=(0,) * (n + 1), d=(1,),
                      boundary=(K,) + tuple(AnnularBoundary((1,)) for _ in range(n)))
    return ModuliSet(tuple(branes), (rec,), order)


def random_moduli(rng: random.Random, diagrams: Sequence[FramedDiagram], n_records: int = 4,
                  with_solid_torus: bool = True, order: int = 3) -> ModuliSet:
    """Synthetic moduli set with random boundaries drawn from ``diagrams``."""
    branes = [Brane("L", S3)]
    if with_solid_torus:
        branes.append(Brane("LK", SOLID_TORUS))
    recs = []
    for _ in range(n_records):
        bd = [rng.choice(diagrams)]
        if with_solid_torus:
            bd.append(AnnularBoundary(tuple(rng.choice((-1, 1, 1, 2)) for _ in range(rng.randint(0, 2))),
                                      rng.randint(0, 1), rng.randint(-1, 1)))
        recs.append(CurveRecord(
            chi=rng.randint(-2, 2),
            weight=Fraction(rng.choice((1, -1, 2, 3)), rng.choice((1, 1, 2, 3))),
            sign=rng.choice((1, -1)),
            linking=tuple(rng.randint(-2, 2) for _ in branes),
            d=(rng.randint(0, order),),
            boundary=tuple(bd),
        ))
    return ModuliSet(tuple(branes), tuple(recs), order)


def random_wall_event(rng: random.Random, m: ModuliSet, kind: str) -> WallEvent:
    """A structurally valid event of the given kind on a random record."""
    cands = list(range(len(m.records)))
    rng.shuffle(cands)
    for ri in cands:
        r = m.records[ri]
        if kind == "Hyperbolic":
            opts = [bi for bi, b in enumerate(m.branes) if b.ambient == S3 and r.boundary[bi].n_crossings]
            if not opts:
                continue
            bi = rng.choice(opts)
            return WallEvent(kind, {"record": ri, "brane": bi,
                                    "crossing": rng.randrange(r.boundary[bi].n_crossings)}, rng.choice((1, -1)))
        bi = rng.randrange(len(m.branes))
        if kind == "Elliptic":
            return WallEvent(kind, {"record": ri, "brane": bi}, rng.choice((1, -1)))
        part = r.boundary[bi]
        ncomp = part.n_components if isinstance(part, FramedDiagram) else 1
        if ncomp == 0:
            continue
        return WallEvent(kind, {"record": ri, "brane": bi, "component": rng.randrange(ncomp)}, rng.choice((1, -1)))
    raise ModuliError(f"no valid site for a {kind} event")
