"""Intersection calculus on the tower of modified fibre powers W^m.

W^m is the m-fold relative product of a nodal-fibre family, modified so
that the pairwise-diagonal correction divisor Gamma^[m] makes sense on
every level; dim W^m = m + 1.  The working basis has two kinds of
generators:

* diagonal monomials q_{(I.)}[(c.)]: a partition of a subset of the
  slots into blocks, each block decorated by a surface class;
* node classes: scrolls F^(I1|I2: J|K)[(c.)] supported over the nodes
  of degenerate fibres, and their sections NS = -Gamma.F.

Coefficients live in the character ring (see charpoly).  Every rewrite
is grading-checked: multiplying by Gamma adds one to the codimension,
multiplying by a degree-d surface class adds d.

The Gamma.NS rewrite uses the self-intersection relation on a scroll.
Its Chern coefficients distinguish the top slot m of the level from the
other slots (the tower is built by adjoining one slot at a time, and
the last slot carries one extra twist); the uniform table one might
guess instead fails every cross-check of the integral battery.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

from .charpoly import CharacterPolynomial
from .staircase import beta
from .surface import FIBRE, SurfaceClass, SurfaceGeometry, default_geometry


@lru_cache(maxsize=None)
def _beta_row(size: int) -> tuple:
    return beta(size)

__all__ = [
    "DiagMonomial",
    "NodeClass",
    "TautExpr",
    "DimensionError",
    "UnsupportedProductError",
    "ltimes",
    "mul_gamma_diag",
    "mul_gamma_node",
    "mul_gamma",
    "mul_class",
    "pullback",
    "pushforward",
    "dimension",
    "integrate",
    "expand_monomial",
    "integrate_word",
    "chern_taut",
    "unit",
    "diag",
    "node_scroll",
    "node_section",
]


class DimensionError(ValueError):
    """Raised when an expression violates the grading."""


class UnsupportedProductError(ValueError):
    """Raised for products the rewriting system does not cover."""


# block decorations: "1" is the unit, "pt" the point class of the
# surface, "pin" a point pinned on one side of a node (fibre factor 1),
# anything else a registered divisor symbol
_KEY_DEGREE = {"1": 0, "pt": 2, "pin": 1}


def _key_degree(key: str) -> int:
    return _KEY_DEGREE.get(key, 1)


def _merge_keys(a: str, b: str, geo: SurfaceGeometry):
    """Product of two block decorations.

    Returns (character coefficient, key) or None when the product
    vanishes (degree above 2, or an unpaired divisor square).
    """
    if a == "1":
        return CharacterPolynomial.one(), b
    if b == "1":
        return CharacterPolynomial.one(), a
    if _key_degree(a) + _key_degree(b) > 2:
        return None
    if a == "pin" or b == "pin":
        return None
    return geo.pair(a, b), "pt"


def _render_blocks(blocks) -> str:
    slot_parts = []
    class_parts = []
    for slots, key in blocks:
        slot_parts.append("{" + ",".join(str(s) for s in slots) + "}")
        class_parts.append(key)
    return "q[%s](%s)" % (",".join(slot_parts), ", ".join(class_parts))


class DiagMonomial:
    """Partial-diagonal monomial q_{(I.)}[(c.)].

    blocks: tuple of (slots, key) with pairwise-disjoint sorted slot
    tuples, sorted by least slot.  Slots not covered by a block are
    free unit points.  Unit singleton blocks are dropped on
    normalization, so the empty tuple is the fundamental class.
    """

    __slots__ = ("m", "blocks")

    def __init__(self, m: int, blocks=()):
        cleaned = []
        seen = set()
        for slots, key in blocks:
            slots = tuple(sorted(slots))
            if not slots:
                continue
            for s in slots:
                if s < 1 or s > m:
                    raise ValueError(f"slot {s} outside level {m}")
                if s in seen:
                    raise ValueError(f"slot {s} used twice")
                seen.add(s)
            if len(slots) == 1 and key == "1":
                continue
            cleaned.append((slots, key))
        cleaned.sort(key=lambda bk: bk[0][0])
        self.m = m
        self.blocks = tuple(cleaned)

    def codim(self) -> int:
        return sum(len(s) - 1 + _key_degree(k) for s, k in self.blocks)

    def block_of(self, slot: int):
        for idx, (slots, _) in enumerate(self.blocks):
            if slot in slots:
                return idx
        return None

    def replace(self, idx: int, slots, key) -> "DiagMonomial":
        blocks = list(self.blocks)
        blocks[idx] = (tuple(slots), key)
        return DiagMonomial(self.m, blocks)

    def __eq__(self, other):
        return (isinstance(other, DiagMonomial)
                and self.m == other.m and self.blocks == other.blocks)

    def __hash__(self):
        return hash(("diag", self.m, self.blocks))

    def render(self) -> str:
        if not self.blocks:
            return "1"
        return _render_blocks(self.blocks)

    def __repr__(self):
        return f"DiagMonomial(m={self.m}, {self.render()})"


class NodeClass:
    """Generalized node scroll (gamma_power 0) or section (1).

    I is the set of slots colliding at the node, split = |I1| the
    number of them approaching along the first branch (I1 is read as
    the initial segment of I; only the size is intrinsic).  J and K
    list the blocks sitting on the two side components, each decorated
    by a key of degree <= 1.  The profile must cover [1, m].
    """

    __slots__ = ("m", "I", "split", "jblocks", "kblocks", "flavor",
                 "gamma_power")

    def __init__(self, m, I, split, jblocks=(), kblocks=(),
                 flavor="reducible", gamma_power=0):
        I = tuple(sorted(I))
        if not 1 <= split <= len(I) - 1:
            raise ValueError(f"split {split} invalid for |I| = {len(I)}")
        if flavor == "irreducible" and kblocks:
            raise ValueError("irreducible profiles keep all side blocks in J")
        if gamma_power not in (0, 1):
            raise ValueError("gamma_power is 0 or 1")

        def clean(side):
            out = []
            for slots, key in side:
                slots = tuple(sorted(slots))
                if _key_degree(key) > 1:
                    raise ValueError(f"side block key {key!r} has degree > 1")
                out.append((slots, key))
            out.sort(key=lambda bk: bk[0][0])
            return tuple(out)

        self.m = m
        self.I = I
        self.split = split
        self.jblocks = clean(jblocks)
        self.kblocks = clean(kblocks)
        self.flavor = flavor
        self.gamma_power = gamma_power
        covered = set(I)
        for slots, _ in self.jblocks + self.kblocks:
            for s in slots:
                if s in covered:
                    raise ValueError(f"slot {s} used twice in node profile")
                covered.add(s)
        if covered != set(range(1, m + 1)):
            raise ValueError("node profile must cover every slot")

    def dim(self) -> int:
        degs = sum(_key_degree(k) for _, k in self.jblocks + self.kblocks)
        return (len(self.jblocks) + len(self.kblocks) + 1
                - self.gamma_power - degs)

    def codim(self) -> int:
        return self.m + 1 - self.dim()

    def key(self):
        return (self.m, self.I, self.split, self.jblocks, self.kblocks,
                self.flavor, self.gamma_power)

    def __eq__(self, other):
        return isinstance(other, NodeClass) and self.key() == other.key()

    def __hash__(self):
        return hash(("node",) + self.key())

    def render(self) -> str:
        name = "NS" if self.gamma_power else "F"
        i1 = "".join(str(s) for s in self.I[:self.split])
        i2 = "".join(str(s) for s in self.I[self.split:])

        def side(blocks):
            parts = []
            for slots, key in blocks:
                body = "{" + ",".join(str(s) for s in slots) + "}"
                if key != "1":
                    body += f"({key})"
                parts.append(body)
            return ",".join(parts)

        body = f"{i1}|{i2}:{side(self.jblocks)}"
        if self.flavor == "reducible":
            body += f"|{side(self.kblocks)}"
        out = f"{name}({body})"
        if self.flavor != "reducible":
            out += "@irr"
        return out

    def __repr__(self):
        return f"NodeClass({self.render()}, m={self.m})"


def _sort_key(gen):
    if isinstance(gen, DiagMonomial):
        return (0, gen.blocks)
    return (1, gen.gamma_power, gen.key()[1:])


class TautExpr:
    """Finite combination of generators with character coefficients.

    All generators share one level and one codimension; generators of
    codimension above m+1 are silently dropped (they are zero on W^m).
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms=None):
        self.m = m
        self.terms = {}
        if terms:
            for gen, coeff in terms.items():
                self.add(gen, coeff)

    def add(self, gen, coeff):
        coeff = _as_char(coeff)
        if coeff.is_zero():
            return
        if gen.m != self.m:
            raise ValueError("level mismatch")
        if gen.codim() > self.m + 1:
            return
        cur = self.terms.get(gen)
        total = coeff if cur is None else cur + coeff
        if total.is_zero():
            self.terms.pop(gen, None)
        else:
            self.terms[gen] = total

    def is_zero(self) -> bool:
        return not self.terms

    def codim(self):
        codims = {gen.codim() for gen in self.terms}
        if len(codims) > 1:
            raise DimensionError(f"mixed codimensions {sorted(codims)}")
        return codims.pop() if codims else None

    def __add__(self, other):
        if isinstance(other, TautExpr):
            if other.m != self.m:
                raise ValueError("level mismatch")
            out = TautExpr(self.m, self.terms)
            for gen, coeff in other.terms.items():
                out.add(gen, coeff)
            return out
        return NotImplemented

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, coeff) -> "TautExpr":
        coeff = _as_char(coeff)
        out = TautExpr(self.m)
        for gen, c in self.terms.items():
            out.add(gen, c * coeff)
        return out

    def __eq__(self, other):
        return (isinstance(other, TautExpr) and self.m == other.m
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def render(self) -> str:
        return render_expr(self)

    def __repr__(self):
        return f"TautExpr(m={self.m}, {self.render()})"


def _as_char(value) -> CharacterPolynomial:
    if isinstance(value, CharacterPolynomial):
        return value
    return CharacterPolynomial.constant(value)


def unit(m: int) -> TautExpr:
    return TautExpr(m, {DiagMonomial(m): CharacterPolynomial.one()})


def diag(m: int, *blocks) -> TautExpr:
    """Build q_{(I.)}[(c.)] with SurfaceClass decorations.

    Each block is (slots, SurfaceClass or key string); general classes
    are split multilinearly into basis keys.
    """
    out = TautExpr(m)
    expansions = [[(CharacterPolynomial.one(), "1")]]
    slot_sets = []
    for slots, cls in blocks:
        slot_sets.append(tuple(slots))
        if isinstance(cls, str):
            expansions.append([(CharacterPolynomial.one(), cls)])
            continue
        opts = []
        for coeff, key in cls.basis_terms():
            opts.append((_as_char(coeff), key))
        expansions.append(opts)
    del expansions[0]

    def rec(idx, coeff, acc):
        if idx == len(slot_sets):
            out.add(DiagMonomial(m, acc), coeff)
            return
        for c, key in expansions[idx]:
            rec(idx + 1, coeff * c, acc + [(slot_sets[idx], key)])

    rec(0, CharacterPolynomial.one(), [])
    return out


def node_scroll(m, I, split, jblocks=(), kblocks=(), flavor="reducible"):
    return TautExpr(m, {NodeClass(m, I, split, jblocks, kblocks, flavor, 0):
                        CharacterPolynomial.one()})


def node_section(m, I, split, jblocks=(), kblocks=(), flavor="reducible"):
    return TautExpr(m, {NodeClass(m, I, split, jblocks, kblocks, flavor, 1):
                        CharacterPolynomial.one()})


# -- partition surgery -------------------------------------------------


def ltimes(pair, blocks):
    """Join the pair into the partition: the four textbook cases."""
    i, j = pair
    if i == j:
        raise ValueError("pair must have distinct entries")
    sets = [set(b) for b in blocks]
    hits = [idx for idx, s in enumerate(sets) if i in s or j in s]
    if len(hits) == 2:
        a, b = hits
        merged = sets[a] | sets[b]
        rest = [s for idx, s in enumerate(sets) if idx not in hits]
        rest.append(merged)
    elif len(hits) == 1 and not ({i, j} <= sets[hits[0]]):
        sets[hits[0]] |= {i, j}
        rest = sets
    elif len(hits) == 1:
        rest = sets
    else:
        sets.append({i, j})
        rest = sets
    out = [tuple(sorted(s)) for s in rest]
    out.sort(key=lambda t: t[0])
    return tuple(out)


def _merge_pair(mono: DiagMonomial, i: int, j: int, geo) -> tuple:
    """Join slots i, j of a monomial; returns (coeff, monomial) or None."""
    bi = mono.block_of(i)
    bj = mono.block_of(j)
    blocks = list(mono.blocks)
    if bi is None and bj is None:
        blocks.append(((i, j), "1"))
        return CharacterPolynomial.one(), DiagMonomial(mono.m, blocks)
    if bi is not None and bj is None:
        slots, key = blocks[bi]
        blocks[bi] = (tuple(sorted(slots + (j,))), key)
        return CharacterPolynomial.one(), DiagMonomial(mono.m, blocks)
    if bi is None:
        slots, key = blocks[bj]
        blocks[bj] = (tuple(sorted(slots + (i,))), key)
        return CharacterPolynomial.one(), DiagMonomial(mono.m, blocks)
    if bi == bj:
        raise ValueError("pair already inside one block")
    si, ki = blocks[bi]
    sj, kj = blocks[bj]
    merged = _merge_keys(ki, kj, geo)
    if merged is None:
        return None
    coeff, key = merged
    blocks = [b for idx, b in enumerate(blocks) if idx not in (bi, bj)]
    blocks.append((tuple(sorted(si + sj)), key))
    return coeff, DiagMonomial(mono.m, blocks)


def _free_slots(mono: DiagMonomial):
    used = {s for slots, _ in mono.blocks for s in slots}
    return [s for s in range(1, mono.m + 1) if s not in used]


# -- Gamma on diagonal monomials ---------------------------------------


def mul_gamma_diag(mono: DiagMonomial, geo: SurfaceGeometry | None = None) -> TautExpr:
    """Gamma^[m] . q_{(I.)}[(c.)].

    Three families: pair joins over pairs not inside a single block,
    node scrolls for every unit block of size >= 2 (beta-weighted
    splits, side points distributed over the two branches), and the
    within-block correction -binom(|B|,2) omega.
    """
    geo = geo or default_geometry()
    m = mono.m
    out = TautExpr(m)

    free = _free_slots(mono)
    # distinct slot pairs joining the same two blocks are distinct
    # summands, so run over slot pairs rather than block pairs
    for i, j in combinations(range(1, m + 1), 2):
        bi, bj = mono.block_of(i), mono.block_of(j)
        if bi is not None and bi == bj:
            continue
        merged = _merge_pair(mono, i, j, geo)
        if merged is None:
            continue
        coeff, joined = merged
        out.add(joined, coeff)

    for idx, (slots, key) in enumerate(mono.blocks):
        size = len(slots)
        if size < 2:
            continue
        # omega correction; the sign is forced by the integral battery
        repaired = _merge_keys(key, "omega", geo)
        if repaired is not None:
            coeff, new_key = repaired
            out.add(mono.replace(idx, slots, new_key),
                    coeff * Fraction(-comb(size, 2)))
        if key != "1":
            continue
        others = ([(bk[0], bk[1]) for k2, bk in enumerate(mono.blocks) if k2 != idx]
                  + [((s,), "1") for s in free])
        weights = _beta_row(size)
        for flavor, _count in geo.node_flavors:
            reducible = flavor == "reducible"
            assignments = _distributions(others, reducible)
            for split_j in range(1, size):
                w = weights[split_j - 1]
                for jside, kside in assignments:
                    out.add(NodeClass(m, slots, split_j, jside, kside,
                                      flavor, 0), Fraction(w))
    return out


def _distributions(blocks, reducible: bool):
    """All ways to lay the remaining blocks on the side components."""
    if not reducible:
        return [(tuple(blocks), ())]
    out = []
    n = len(blocks)
    for mask in range(1 << n):
        jside = tuple(b for t, b in enumerate(blocks) if not mask >> t & 1)
        kside = tuple(b for t, b in enumerate(blocks) if mask >> t & 1)
        out.append((jside, kside))
    return out


# -- slot classes -------------------------------------------------------


def mul_class(gen, slot: int, cls: SurfaceClass,
              geo: SurfaceGeometry | None = None) -> TautExpr:
    """Multiply the class c^(slot) into a generator."""
    geo = geo or default_geometry()
    out = TautExpr(gen.m)
    for coeff, key in cls.basis_terms():
        coeff = _as_char(coeff)
        if key == "1":
            out.add(gen, coeff)
            continue
        if isinstance(gen, DiagMonomial):
            idx = gen.block_of(slot)
            if idx is None:
                blocks = gen.blocks + (((slot,), key),)
                out.add(DiagMonomial(gen.m, blocks), coeff)
                continue
            slots, cur = gen.blocks[idx]
            merged = _merge_keys(cur, key, geo)
            if merged is None:
                continue
            extra, new_key = merged
            out.add(gen.replace(idx, slots, new_key), coeff * extra)
            continue
        # node generator: positive-degree classes die on the node slots
        if slot in gen.I:
            continue
        if _key_degree(key) > 1:
            continue
        hit = False
        for side_name in ("jblocks", "kblocks"):
            side = getattr(gen, side_name)
            for t, (slots, cur) in enumerate(side):
                if slot not in slots:
                    continue
                hit = True
                if cur != "1":
                    break
                new_side = list(side)
                new_side[t] = (slots, key)
                kwargs = {"jblocks": gen.jblocks, "kblocks": gen.kblocks}
                kwargs[side_name] = tuple(new_side)
                out.add(NodeClass(gen.m, gen.I, gen.split,
                                  kwargs["jblocks"], kwargs["kblocks"],
                                  gen.flavor, gen.gamma_power), coeff)
                break
            if hit:
                break
        if not hit:
            raise ValueError(f"slot {slot} missing from node profile")
    return out


# -- Gamma on node classes ----------------------------------------------


def _mu(side: str, has_top: bool, split: int, r: int) -> int:
    if side == "J":
        return -(2 * split + 1) if has_top else -(2 * split - 1)
    return -(2 * (r - split) + 1) if has_top else -(2 * (r - split) - 1)


def _chern_exponent(side: str, has_top: bool, split: int, r: int,
                    which: str) -> int:
    # two line-bundle factors; their exponents sum to the mu twist
    if side == "J":
        if which == "first":
            return split if has_top else split - 1
        return split + 1 if has_top else split
    if which == "first":
        return r - split + 1 if has_top else r - split
    return r - split if has_top else r - split - 1


def _move_block(node: NodeClass, side_name: str, idx: int,
                target_side: str):
    """Slide a whole unit side block into the node; None if decorated."""
    side = getattr(node, side_name)
    slots, key = side[idx]
    if key != "1":
        return None
    new_side = tuple(b for t, b in enumerate(side) if t != idx)
    kwargs = {"jblocks": node.jblocks, "kblocks": node.kblocks}
    kwargs[side_name] = new_side
    split = node.split + (len(slots) if target_side == "J" else 0)
    return NodeClass(node.m, node.I + slots, split,
                     kwargs["jblocks"], kwargs["kblocks"],
                     node.flavor, node.gamma_power)


def _merge_side_blocks(node: NodeClass, side_name: str, ia: int, ib: int,
                       pin: bool = False):
    side = getattr(node, side_name)
    (sa, ka), (sb, kb) = side[ia], side[ib]
    if pin:
        if ka != "1" or kb != "1":
            return None
        key = "pin"
    elif ka == "1":
        key = kb
    elif kb == "1":
        key = ka
    else:
        return None
    new_side = [b for t, b in enumerate(side) if t not in (ia, ib)]
    new_side.append((tuple(sorted(sa + sb)), key))
    kwargs = {"jblocks": node.jblocks, "kblocks": node.kblocks}
    kwargs[side_name] = tuple(new_side)
    return NodeClass(node.m, node.I, node.split,
                     kwargs["jblocks"], kwargs["kblocks"],
                     node.flavor, node.gamma_power)


def _insert_omega(node: NodeClass, side_name: str, idx: int):
    side = getattr(node, side_name)
    slots, key = side[idx]
    if key != "1":
        return None
    new_side = list(side)
    new_side[idx] = (slots, "omega")
    kwargs = {"jblocks": node.jblocks, "kblocks": node.kblocks}
    kwargs[side_name] = tuple(new_side)
    return NodeClass(node.m, node.I, node.split,
                     kwargs["jblocks"], kwargs["kblocks"],
                     node.flavor, node.gamma_power)


def _c1_terms(node: NodeClass):
    """First Chern data of the scroll bundle, as (coeff, move) pairs.

    Moves are ("move", side_name, idx, target, element) per element of
    each side block, ("pair", side_name, ia, ib) for cross-block joins
    and ("omega", side_name, idx) with weight binom(|B|, 2) for
    within-block pairs.
    """
    r = len(node.I)
    split = node.split
    terms = []
    sides = [("jblocks", "J")]
    if node.flavor == "reducible":
        sides.append(("kblocks", "K"))
        targets = {"jblocks": ["J"], "kblocks": ["K"]}
    else:
        # one side component, both branch approaches available
        targets = {"jblocks": ["J", "K"]}
    for side_name, _tag in sides:
        side = getattr(node, side_name)
        for idx, (slots, _key) in enumerate(side):
            for a in slots:
                for target in targets[side_name]:
                    mu = _mu(target, a == node.m, split, r)
                    terms.append((mu, ("move", side_name, idx, target, a)))
        for ia, ib in combinations(range(len(side)), 2):
            terms.append((-2, ("pair", side_name, ia, ib)))
        for idx, (slots, _key) in enumerate(side):
            if len(slots) >= 2:
                terms.append((-2 * comb(len(slots), 2),
                              ("omega", side_name, idx)))
    return terms


def _chern_factor(node: NodeClass, which: str):
    """One of the two line-bundle divisors whose product is c2."""
    r = len(node.I)
    split = node.split
    terms = []
    if node.flavor == "reducible":
        sides = [("jblocks", ["J"]), ("kblocks", ["K"])]
    else:
        sides = [("jblocks", ["J", "K"])]
    for side_name, targets in sides:
        side = getattr(node, side_name)
        for idx, (slots, _key) in enumerate(side):
            for a in slots:
                for target in targets:
                    e = _chern_exponent(target, a == node.m, split, r, which)
                    terms.append((-e, ("move", side_name, idx, target, a)))
        for ia, ib in combinations(range(len(side)), 2):
            terms.append((-1, ("pair", side_name, ia, ib)))
        for idx, (slots, _key) in enumerate(side):
            if len(slots) >= 2:
                terms.append((-comb(len(slots), 2), ("omega", side_name, idx)))
    return terms


def _apply_move(node: NodeClass, move):
    kind = move[0]
    if kind == "move":
        return _move_block(node, move[1], move[2], move[3])
    if kind == "pair":
        return _merge_side_blocks(node, move[1], move[2], move[3])
    return _insert_omega(node, move[1], move[2])


def _resolve_c2(node: NodeClass, t1, t2, geo):
    """Product of two Chern-factor terms on the scroll; see (coeff, node)."""
    c1, mv1 = t1
    c2, mv2 = t2
    coeff = _as_char(Fraction(c1 * c2))
    k1, k2 = mv1[0], mv2[0]
    if k1 == "move" and k2 == "move":
        if mv1[1] == mv2[1] and mv1[2] == mv2[2]:
            return None  # a node-section class squares to zero on the base
        first = _apply_move(node, mv1)
        if first is None:
            return None
        second = _relocate_and_apply(first, node, mv2)
        if second is None:
            return None
        return coeff, second
    if {k1, k2} == {"move", "pair"}:
        mv_move = mv1 if k1 == "move" else mv2
        mv_pair = mv1 if k1 == "pair" else mv2
        if mv_move[1] == mv_pair[1] and mv_move[2] in (mv_pair[2], mv_pair[3]):
            # joining a pair at the node collapses to both blocks moving
            other = mv_pair[2] if mv_move[2] == mv_pair[3] else mv_pair[3]
            first = _apply_move(node, mv_move)
            if first is None:
                return None
            side = getattr(node, mv_move[1])
            target_slots = side[other][0]
            second = _move_named(first, mv_move[1], target_slots, mv_move[3])
            if second is None:
                return None
            return coeff, second
        first = _apply_move(node, mv_pair)
        if first is None:
            return None
        side = getattr(node, mv_move[1])
        second = _move_named(first, mv_move[1], side[mv_move[2]][0],
                             mv_move[3])
        if second is None:
            return None
        return coeff, second
    if k1 == "pair" and k2 == "pair":
        if mv1[1] == mv2[1] and {mv1[2], mv1[3]} == {mv2[2], mv2[3]}:
            # the squared join contributes minus the side omega-degree
            side_tag = "J" if mv1[1] == "jblocks" else "K"
            pinned = _merge_side_blocks(node, mv1[1], mv1[2], mv1[3],
                                        pin=True)
            if pinned is None:
                return None
            return coeff * (-geo.side_omega_degree(side_tag)), pinned
        first = _apply_move(node, mv1)
        if first is None:
            return None
        second = _relocate_and_apply(first, node, mv2)
        if second is None:
            return None
        return coeff, second
    if k1 == "omega" and k2 == "omega" and mv1 == mv2:
        return None
    first = _apply_move(node, mv1)
    if first is None:
        return None
    second = _relocate_and_apply(first, node, mv2)
    if second is None:
        return None
    return coeff, second


def _move_named(node: NodeClass, side_name: str, slots, target):
    side = getattr(node, side_name)
    for idx, (s, _k) in enumerate(side):
        if set(slots) <= set(s):
            return _move_block(node, side_name, idx, target)
    return None


def _relocate_and_apply(node: NodeClass, original: NodeClass, move):
    """Re-find the blocks of a move after the profile changed."""
    kind = move[0]
    side_name = move[1]
    orig_side = getattr(original, side_name)
    if kind == "move":
        slots = orig_side[move[2]][0]
        return _move_named(node, side_name, slots, move[3])
    side = getattr(node, side_name)

    def find(slots):
        for idx, (s, _k) in enumerate(side):
            if set(slots) <= set(s):
                return idx
        return None

    if kind == "pair":
        ia = find(orig_side[move[2]][0])
        ib = find(orig_side[move[3]][0])
        if ia is None or ib is None:
            return None
        if ia == ib:
            return _insert_omega(node, side_name, ia)
        return _merge_side_blocks(node, side_name, ia, ib)
    idx = find(orig_side[move[2]][0])
    if idx is None:
        return None
    return _insert_omega(node, side_name, idx)


def mul_gamma_node(node: NodeClass, geo: SurfaceGeometry | None = None) -> TautExpr:
    """Gamma^[m] . (node class)."""
    geo = geo or default_geometry()
    out = TautExpr(node.m)
    if node.gamma_power == 0:
        section = NodeClass(node.m, node.I, node.split, node.jblocks,
                            node.kblocks, node.flavor, 1)
        out.add(section, Fraction(-1))
        return out
    # Gamma^2 . F = Gamma.(c1 F-classes) + c2 F-classes; the first
    # factor turns each scroll into minus its section
    for coeff, move in _c1_terms(node):
        moved = _apply_move(node, move)
        if moved is None:
            continue
        out.add(moved, Fraction(-coeff))
    scroll = NodeClass(node.m, node.I, node.split, node.jblocks,
                       node.kblocks, node.flavor, 0)
    for t1 in _chern_factor(scroll, "first"):
        for t2 in _chern_factor(scroll, "second"):
            resolved = _resolve_c2(scroll, t1, t2, geo)
            if resolved is None:
                continue
            coeff, gen = resolved
            out.add(gen, coeff)
    return out


def mul_gamma(expr: TautExpr, geo: SurfaceGeometry | None = None) -> TautExpr:
    geo = geo or default_geometry()
    out = TautExpr(expr.m)
    for gen, coeff in expr.terms.items():
        if isinstance(gen, DiagMonomial):
            piece = mul_gamma_diag(gen, geo)
        else:
            piece = mul_gamma_node(gen, geo)
        for g2, c2 in piece.terms.items():
            out.add(g2, coeff * c2)
    return out


# -- level maps ---------------------------------------------------------


def pullback(expr: TautExpr, geo: SurfaceGeometry | None = None) -> TautExpr:
    """Pull back along W^(m+1) -> W^m (forget the new last slot)."""
    geo = geo or default_geometry()
    m = expr.m + 1
    out = TautExpr(m)
    for gen, coeff in expr.terms.items():
        if isinstance(gen, DiagMonomial):
            out.add(DiagMonomial(m, gen.blocks), coeff)
            continue
        r = len(gen.I)
        split = gen.split
        completions = [("jblocks", "J")]
        if gen.flavor == "reducible":
            completions.append(("kblocks", "K"))
        if gen.gamma_power == 0:
            for side_name, _tag in completions:
                kwargs = {"jblocks": gen.jblocks, "kblocks": gen.kblocks}
                kwargs[side_name] = kwargs[side_name] + (((m,), "1"),)
                out.add(NodeClass(m, gen.I, split, kwargs["jblocks"],
                                  kwargs["kblocks"], gen.flavor, 0), coeff)
            continue
        # sections: each completion plus its polarization corrections
        for side_name, tag in completions:
            kwargs = {"jblocks": gen.jblocks, "kblocks": gen.kblocks}
            kwargs[side_name] = kwargs[side_name] + (((m,), "1"),)
            out.add(NodeClass(m, gen.I, split, kwargs["jblocks"],
                              kwargs["kblocks"], gen.flavor, 1), coeff)
        # the new point can also run into the node along either branch
        branch_pins = [(split + 1, Fraction(split + 1)),
                       (split, Fraction(r - split + 1))]
        for new_split, weight in branch_pins:
            out.add(NodeClass(m, gen.I + (m,), new_split, gen.jblocks,
                              gen.kblocks, gen.flavor, 0), coeff * weight)
        for side_name in ("jblocks", "kblocks"):
            side = getattr(gen, side_name)
            for idx, (slots, key) in enumerate(side):
                new_side = list(side)
                new_side[idx] = (tuple(sorted(slots + (m,))), key)
                kwargs = {"jblocks": gen.jblocks, "kblocks": gen.kblocks}
                kwargs[side_name] = tuple(new_side)
                out.add(NodeClass(m, gen.I, split, kwargs["jblocks"],
                                  kwargs["kblocks"], gen.flavor, 0), coeff)
    return out


def pushforward(expr: TautExpr, geo: SurfaceGeometry | None = None) -> TautExpr:
    """Push forward along W^m -> W^(m-1), integrating out the last slot."""
    geo = geo or default_geometry()
    m = expr.m
    if m < 2:
        raise ValueError("cannot push below the first level")
    out = TautExpr(m - 1)
    for gen, coeff in expr.terms.items():
        if isinstance(gen, NodeClass):
            if gen.gamma_power == 0:
                continue  # scroll fibres are contracted
            raise UnsupportedProductError(
                "pushforward of a node section leaves the generator basis")
        idx = gen.block_of(m)
        if idx is None:
            continue
        slots, key = gen.blocks[idx]
        if len(slots) > 1:
            rest = gen.replace(idx, tuple(s for s in slots if s != m), key)
            out.add(DiagMonomial(m - 1, rest.blocks), coeff)
            continue
        rest = DiagMonomial(m - 1,
                            tuple(b for t, b in enumerate(gen.blocks)
                                  if t != idx))
        if key == "pt":
            for g2, c2 in mul_class(rest, 1, FIBRE, geo).terms.items():
                out.add(g2, coeff * c2)
            continue
        if key == "pin":
            raise UnsupportedProductError("pinned side points have no level map")
        out.add(rest, coeff * _fibre_deg(key, geo))
    return out


def _fibre_deg(key, geo):
    if key not in geo.fibre_degrees:
        raise KeyError(f"no fibre degree registered for divisor {key!r}")
    return geo.fibre_degrees[key]


def dimension(gen) -> int:
    if isinstance(gen, DiagMonomial):
        return gen.m + 1 - gen.codim()
    return gen.dim()


def integrate(expr: TautExpr, geo: SurfaceGeometry | None = None) -> CharacterPolynomial:
    """Integral over W^m of a dimension-0 expression."""
    geo = geo or default_geometry()
    if not expr.is_zero() and expr.codim() != expr.m + 1:
        raise DimensionError(
            f"expected codimension {expr.m + 1}, got {expr.codim()}")
    total = CharacterPolynomial.zero()
    diag_part = TautExpr(expr.m)
    for gen, coeff in expr.terms.items():
        if isinstance(gen, DiagMonomial):
            diag_part.add(gen, coeff)
            continue
        if gen.gamma_power == 0:
            raise DimensionError("node scrolls never reach dimension 0")
        value = geo.node_count(gen.flavor)
        for slots, key in gen.jblocks + gen.kblocks:
            if key == "pin":
                continue
            if _key_degree(key) != 1:
                raise DimensionError("side block of degree != 1 at dimension 0")
            value = value * _fibre_deg(key, geo)
        total = total + coeff * value
    level = diag_part
    for k in range(expr.m, 1, -1):
        level = pushforward(level, geo)
    for gen, coeff in level.terms.items():
        if gen.blocks and gen.blocks[0][1] == "pt":
            total = total + coeff
    return total


# -- word evaluation ----------------------------------------------------


def _distribute(factors, m):
    """Expand delta/small-diagonal sugar into gamma-word combinations.

    Yields (rational coefficient, list of primitive factors).  The
    primitive vocabulary is ("gamma", k), ("class", slot, SurfaceClass)
    and ("seed", TautExpr).
    """
    combos = [(Fraction(1), [])]
    for factor in factors:
        kind = factor[0]
        if kind in ("gamma", "class", "seed"):
            combos = [(c, w + [factor]) for c, w in combos]
            continue
        if kind == "delta":
            k = factor[1]
            if k < 1 or k > m:
                raise ValueError(f"diagonal index {k} outside level {m}")
            alts = []
            if k >= 2:
                alts.append((Fraction(1), ("gamma", k)))
            if k >= 3:
                alts.append((Fraction(-1), ("gamma", k - 1)))
            if not alts:
                return  # Delta^(1) = 0 kills the word
            combos = [(c * ac, w + [af]) for c, w in combos
                      for ac, af in alts]
            continue
        if kind == "smalldiag":
            sub = [("delta", k) for k in range(2, m + 1)]
            scaled = []
            for c, w in combos:
                scaled.append((c / factorial(m - 1), w))
            combos = scaled
            for piece in sub:
                combos = list(_fan(combos, piece, m))
                if not combos:
                    return
            continue
        raise ValueError(f"unknown factor {factor!r}")
    yield from combos


def _fan(combos, delta_factor, m):
    k = delta_factor[1]
    alts = []
    if k >= 2:
        alts.append((Fraction(1), ("gamma", k)))
    if k >= 3:
        alts.append((Fraction(-1), ("gamma", k - 1)))
    for c, w in combos:
        for ac, af in alts:
            yield c * ac, w + [af]


def _word_codim(word, seed):
    codim = seed.codim() or 0 if seed is not None else 0
    for factor in word:
        if factor[0] == "gamma":
            codim += 1
        elif factor[0] == "class":
            codim += factor[2].pure_degree()
    return codim


def _split_word(word):
    gammas = {}
    classes = []
    seed = None
    for factor in word:
        if factor[0] == "gamma":
            gammas.setdefault(factor[1], 0)
            gammas[factor[1]] += 1
        elif factor[0] == "class":
            classes.append(factor)
        else:
            if seed is not None:
                raise UnsupportedProductError(
                    "products of two seeded classes are not supported")
            seed = factor[1]
    return gammas, classes, seed


def _eval_word_up(coeff, word, m, geo):
    """Bottom-up evaluation: lower-level gammas first, then pull up."""
    gammas, classes, seed = _split_word(word)
    if any(k == 1 for k in gammas):
        return TautExpr(m)
    if seed is not None and any(k < seed.m for k in gammas):
        raise UnsupportedProductError(
            "gamma factors below the seeded level need the integral pipeline")
    start = seed.m if seed is not None else min(gammas, default=m)
    expr = seed if seed is not None else unit(start)
    if expr.m != start:
        raise UnsupportedProductError("seed level mismatch")
    for k in range(start, m + 1):
        for _ in range(gammas.get(k, 0)):
            expr = mul_gamma(expr, geo)
        if k < m:
            expr = pullback(expr, geo)
    for _kind, slot, cls in classes:
        nxt = TautExpr(m)
        for gen, c in expr.terms.items():
            for g2, c2 in mul_class(gen, slot, cls, geo).terms.items():
                nxt.add(g2, c * c2)
        expr = nxt
    return expr.scale(coeff)


def expand_monomial(factors, m: int, geo: SurfaceGeometry | None = None,
                    seed: TautExpr | None = None) -> TautExpr:
    """Normal form of a product word at level m.

    Factors: ("gamma", k) for Gamma^[k], ("delta", k) for Delta^(k) =
    Gamma^[k] - Gamma^[k-1], ("smalldiag",) for the small-diagonal
    correction, ("class", slot, SurfaceClass).  An optional seed
    expression starts the pipeline at its own level.
    """
    geo = geo or default_geometry()
    factors = list(factors)
    if seed is not None:
        factors.append(("seed", seed))
    out = TautExpr(m)
    for coeff, word in _distribute(factors, m):
        if _word_codim(word, seed) > m + 1:
            raise DimensionError("word exceeds the dimension of the level")
        out = out + _eval_word_up(coeff, word, m, geo)
    return out


def integrate_word(factors, m: int, geo: SurfaceGeometry | None = None,
                   seed: TautExpr | None = None) -> CharacterPolynomial:
    """Integral over W^m of a product word.

    Unlike expand_monomial this also supports gamma factors below a
    seeded level, by pushing the evaluated top part down level by
    level (node scrolls are contracted along the way).
    """
    geo = geo or default_geometry()
    factors = list(factors)
    if seed is not None:
        factors.append(("seed", seed))
    total = CharacterPolynomial.zero()
    for coeff, word in _distribute(factors, m):
        gammas, classes, wseed = _split_word(word)
        if any(k == 1 for k in gammas):
            continue
        codim = _word_codim(word, wseed)
        if codim != m + 1:
            raise DimensionError(
                f"word has codimension {codim}, integration needs {m + 1}")
        if wseed is None or all(k >= wseed.m for k in gammas):
            expr = _eval_word_up(coeff, word, m, geo)
            total = total + integrate(expr, geo)
            continue
        # top-down: evaluate everything at or above the seed level,
        # then push and apply the remaining lower gammas
        expr = wseed.scale(coeff)
        for k in range(wseed.m, m + 1):
            for _ in range(gammas.get(k, 0)):
                expr = mul_gamma(expr, geo)
            if k < m:
                expr = pullback(expr, geo)
        for _kind, slot, cls in classes:
            nxt = TautExpr(m)
            for gen, c in expr.terms.items():
                for g2, c2 in mul_class(gen, slot, cls, geo).terms.items():
                    nxt.add(g2, c * c2)
            expr = nxt
        for k in range(m, 1, -1):
            expr = pushforward(expr, geo)
            for _ in range(gammas.get(k - 1, 0) if k - 1 < wseed.m else 0):
                expr = mul_gamma(expr, geo)
        for gen, c in expr.terms.items():
            if gen.blocks and gen.blocks[0][1] == "pt":
                total = total + c
    return total


def chern_taut(m: int, geo: SurfaceGeometry | None = None,
               lsymbol: SurfaceClass | None = None) -> list:
    """Graded pieces of prod_i (1 + L^(i) - Delta^(i))."""
    geo = geo or default_geometry()
    lcls = lsymbol or SurfaceClass.divisor("L")
    pieces = [TautExpr(m) for _ in range(m + 2)]
    pieces[0] = unit(m)

    choices = []
    for i in range(1, m + 1):
        opts = [(0, None), (1, ("class", i, lcls))]
        if i >= 2:
            opts.append((1, ("delta-neg", i)))
        choices.append(opts)

    def rec(idx, degree, word):
        if idx == len(choices):
            if degree == 0:
                return
            if degree > m + 1:
                return
            sign = Fraction(1)
            factors = []
            for f in word:
                if f[0] == "delta-neg":
                    sign = -sign
                    factors.append(("delta", f[1]))
                else:
                    factors.append(f)
            piece = expand_monomial(factors, m, geo)
            pieces[degree] = pieces[degree] + piece.scale(sign)
            return
        for d, f in choices[idx]:
            rec(idx + 1, degree + d, word + ([f] if f else []))

    rec(0, 0, [])
    return pieces[:m + 2]


# -- rendering ----------------------------------------------------------


def _collapsed_groups(expr: TautExpr):
    """Detect complete unit fillings of two-slot node profiles.

    A profile with |I| = 2 whose complement is spread over the sides as
    unit singletons in all possible ways, with one common coefficient,
    renders as the bare symbol F(13:).
    """
    remaining = dict(expr.terms)
    collapsed = []
    nodes = [g for g in remaining if isinstance(g, NodeClass)
             and len(g.I) == 2]
    seen_groups = set()
    for gen in nodes:
        others = tuple(sorted(set(range(1, gen.m + 1)) - set(gen.I)))
        group_key = (gen.m, gen.I, gen.flavor, gen.gamma_power)
        if group_key in seen_groups:
            continue
        if gen.flavor == "reducible":
            fillings = []
            for mask in range(1 << len(others)):
                j = tuple(((s,), "1") for t, s in enumerate(others)
                          if not mask >> t & 1)
                k = tuple(((s,), "1") for t, s in enumerate(others)
                          if mask >> t & 1)
                fillings.append(NodeClass(gen.m, gen.I, 1, j, k,
                                          gen.flavor, gen.gamma_power))
        else:
            fillings = [NodeClass(gen.m, gen.I, 1,
                                  tuple(((s,), "1") for s in others), (),
                                  gen.flavor, gen.gamma_power)]
        coeffs = [remaining.get(f) for f in fillings]
        if None in coeffs or any(c != coeffs[0] for c in coeffs):
            continue
        seen_groups.add(group_key)
        for f in fillings:
            del remaining[f]
        name = "NS" if gen.gamma_power else "F"
        label = name + "(%s:)" % "".join(str(s) for s in gen.I)
        if gen.flavor != "reducible":
            label += "@irr"
        collapsed.append((gen, label, coeffs[0]))
    return remaining, collapsed


def render_expr(expr: TautExpr) -> str:
    if expr.is_zero():
        return "0"
    remaining, collapsed = _collapsed_groups(expr)
    entries = []
    for gen, coeff in remaining.items():
        entries.append((_sort_key(gen), gen.render(), coeff))
    for gen, label, coeff in collapsed:
        entries.append((_sort_key(gen), label, coeff))
    entries.sort(key=lambda e: e[0])
    parts = []
    for _key, label, coeff in entries:
        text = coeff.render()
        if label == "1":
            piece = f"({text})" if ("+" in text[1:] or "-" in text[1:]) else text
        elif text == "1":
            piece = label
        elif text == "-1":
            piece = "-" + label
        elif ("+" in text[1:]) or ("-" in text[1:]):
            piece = f"({text})*{label}"
        else:
            piece = f"{text}*{label}"
        if not parts:
            parts.append(piece)
        elif piece.startswith("-"):
            parts.append("- " + piece[1:])
        else:
            parts.append("+ " + piece)
    return " ".join(parts)
