"""Framed link diagrams as Morse words.

A diagram is read bottom to top as a sequence of events acting on a row of
strand slots: ``cup p`` creates two strands at slots p, p+1; ``cap p`` joins
them; a crossing swaps the strands at p and p+1.  Internally a crossing is
stored by its geometry: ``/`` when the over-strand runs from bottom-left to
top-right, ``\\`` when it runs from bottom-right to top-left.  The signed
forms ``x+`` / ``x-`` accepted by the parser are crossing signs with respect
to the canonical orientation, in which each component leaves its first cup
upward along the left leg.

Framing is always the blackboard framing, i.e. the writhe of the component.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .errors import KirbyLabError
from .linalg import symmetric_inertia

CUP, CAP, OVER_R, OVER_L = "cup", "cap", "/", "\\"
_CROSS = (OVER_R, OVER_L)

_INTERNAL = {
    CUP: {"TL": "TR", "TR": "TL"},
    CAP: {"BL": "BR", "BR": "BL"},
    "x": {"BL": "TR", "TR": "BL", "BR": "TL", "TL": "BR"},
}


class LinkParseError(KirbyLabError):
    """Malformed link diagram."""


class OpenStrand(LinkParseError):
    """Strands remain open at the top of the diagram."""


class WidthUnderflow(LinkParseError):
    """An event refers to slots that do not exist at that height."""


class InvalidComponent(KirbyLabError):
    """A component index is out of range or not allowed for the move."""


@dataclass(frozen=True)
class Site:
    """One incidence of a component's traversal with an event."""

    event: int
    kind: str  # "cup", "cap" or "x"
    up: bool  # direction of travel at the site (extrema: direction on leaving)
    sense: str | None = None  # "cw" / "ccw" for extrema
    diag: str | None = None  # "BLTR" / "BRTL" for crossings

    def reversed(self) -> "Site":
        sense = None if self.sense is None else ("ccw" if self.sense == "cw" else "cw")
        return Site(self.event, self.kind, not self.up, sense, self.diag)

    @property
    def exponent(self) -> int:
        """Power of G carried by an extremum: ccw caps +1, cw cups -1."""
        if self.kind == CAP and self.sense == "ccw":
            return 1
        if self.kind == CUP and self.sense == "cw":
            return -1
        return 0


def _check_events(events):
    width = 0
    for k, (kind, pos) in enumerate(events):
        if kind == CUP:
            if not 0 <= pos <= width:
                raise WidthUnderflow(f"event {k}: cup at {pos} with width {width}")
            width += 2
        elif kind in (CAP,) + _CROSS:
            if not 0 <= pos or pos + 1 >= width:
                raise WidthUnderflow(f"event {k}: {kind} at {pos} with width {width}")
            if kind == CAP:
                width -= 2
        else:
            raise LinkParseError(f"event {k}: unknown kind {kind!r}")
    if width:
        raise OpenStrand(f"{width} strands left open")


def _connect(events):
    """External connections between event ports, via a sweep."""
    ext = {}
    slots: list[tuple[int, str]] = []
    for k, (kind, p) in enumerate(events):
        if kind == CUP:
            slots[p:p] = [(k, "TL"), (k, "TR")]
        else:
            for port, s in (("BL", slots[p]), ("BR", slots[p + 1])):
                ext[s] = (k, port)
                ext[(k, port)] = s
            slots[p:p + 2] = [] if kind == CAP else [(k, "TL"), (k, "TR")]
    return ext


def _trace(events):
    """Canonical traversals: one list of sites per component, in first-cup order."""
    ext = _connect(events)
    seen = set()
    comps = []
    for k0, (kind, _) in enumerate(events):
        if kind != CUP or k0 in seen:
            continue
        sites = []
        cur = (k0, "TL")  # leave the first cup upward along the left leg
        while True:
            k, port = ext[cur]
            ekind = events[k][0]
            key = "x" if ekind in _CROSS else ekind
            up = port in ("BL", "BR")
            out = _INTERNAL[key][port]
            if key == CUP:
                sense = "cw" if port == "TR" else "ccw"
                site = Site(k, CUP, True, sense)
            elif key == CAP:
                sense = "cw" if port == "BL" else "ccw"
                site = Site(k, CAP, False, sense)
            else:
                diag = "BLTR" if port in ("BL", "TR") else "BRTL"
                site = Site(k, "x", up, None, diag)
            seen.add(k)
            sites.append(site)
            if k == k0:
                break
            cur = (k, out)
        comps.append(sites)
    return comps


def crossing_sign(kind: str, up_bltr: bool, up_brtl: bool) -> int:
    same = 1 if up_bltr == up_brtl else -1
    return same * (1 if kind == OVER_R else -1)


class LinkDiagram:
    """An oriented framed link diagram given as a Morse word.

    ``reversed`` flags components whose orientation is opposite to the
    canonical one; ``order`` lists, for each component index, the position
    of its first cup among all component-opening cups (identity by default).
    """

    def __init__(self, events, reversed=None, order=None):
        ev = []
        for kind, pos in events:
            if kind in ("x+", "x-"):
                raise LinkParseError("signed crossings must go through parse_diagram")
            ev.append((str(kind), int(pos)))
        _check_events(ev)
        self.events: tuple = tuple(ev)
        canon = _trace(self.events)
        n = len(canon)
        order = tuple(range(n)) if order is None else tuple(order)
        if sorted(order) != list(range(n)):
            raise InvalidComponent(f"order {order} is not a permutation of {n} components")
        self.order = order
        rev = tuple(bool(r) for r in (reversed or [False] * n))
        if len(rev) != n:
            raise InvalidComponent(f"{len(rev)} orientation flags for {n} components")
        self.reversed = rev
        self._canon = canon

    # -- structure ----------------------------------------------------------
    @property
    def n_components(self) -> int:
        return len(self._canon)

    @cached_property
    def traversals(self) -> list[list[Site]]:
        """Sites of each component in traversal order; the first cup comes last."""
        out = []
        for u in range(self.n_components):
            sites = self._canon[self.order[u]]
            if self.reversed[u]:
                body = [s.reversed() for s in reversed(sites[:-1])]
                sites = body + [sites[-1].reversed()]
            out.append(list(sites))
        return out

    @cached_property
    def event_info(self) -> list[dict]:
        """Per event: component(s), directions, senses."""
        info: list[dict] = [dict() for _ in self.events]
        for c, sites in enumerate(self.traversals):
            for s in sites:
                d = info[s.event]
                if s.kind == "x":
                    d[s.diag] = (c, s.up)
                else:
                    d["comp"] = c
                    d["sense"] = s.sense
        for c, sites in enumerate(self.traversals):
            info[sites[-1].event]["first"] = True
        return info

    def component_of_event(self, k: int):
        d = self.event_info[k]
        if "comp" in d:
            return d["comp"]
        return d["BLTR"][0], d["BRTL"][0]

    def crossing_signs(self) -> list[tuple[int, int, int, int]]:
        """(event, component of BL strand, component of BR strand, sign) per crossing."""
        out = []
        for k, (kind, _) in enumerate(self.events):
            if kind in _CROSS:
                d = self.event_info[k]
                (c1, u1), (c2, u2) = d["BLTR"], d["BRTL"]
                out.append((k, c1, c2, crossing_sign(kind, u1, u2)))
        return out

    def slot_states(self) -> list[list[tuple[int, bool]]]:
        """For each height t (after t events), (component, up?) of every slot."""
        info = self.event_info
        slots: list[tuple[int, bool]] = []
        states = [list(slots)]
        for k, (kind, p) in enumerate(self.events):
            d = info[k]
            if kind == CUP:
                c = d["comp"]
                left_up = d["sense"] == "cw"
                slots[p:p] = [(c, left_up), (c, not left_up)]
            elif kind == CAP:
                del slots[p:p + 2]
            else:
                slots[p], slots[p + 1] = d["BRTL"], d["BLTR"]
            states.append(list(slots))
        return states

    @cached_property
    def max_width(self) -> int:
        return max(len(s) for s in self.slot_states())

    def with_orientation(self, reversed) -> "LinkDiagram":
        return LinkDiagram(self.events, reversed, self.order)

    # -- serialization ------------------------------------------------------
    def signed_events(self) -> list[tuple[str, int]]:
        """Events with crossings written as signs under the canonical orientation."""
        canonical = LinkDiagram(self.events)
        signs = {k: s for k, _, _, s in canonical.crossing_signs()}
        return [(("x+" if signs[k] > 0 else "x-") if kind in _CROSS else kind, p)
                for k, (kind, p) in enumerate(self.events)]

    def to_json(self) -> dict:
        obj = {"events": [{"kind": k, "pos": p} for k, p in self.signed_events()]}
        if any(self.reversed):
            obj["reversed"] = list(self.reversed)
        if self.order != tuple(range(self.n_components)):
            obj["order"] = list(self.order)
        return obj

    def to_text(self) -> str:
        return "\n".join(f"{k} {p}" for k, p in self.signed_events())

    def __eq__(self, other):
        return isinstance(other, LinkDiagram) and (self.events, self.reversed, self.order) == (other.events, other.reversed, other.order)

    def __hash__(self):
        return hash((self.events, self.reversed, self.order))

    def __repr__(self):
        return f"LinkDiagram({self.to_text().replace(chr(10), '; ')})"


# ---------------------------------------------------------------------------
# parsing


def _resolve_signed(events, reversed=None, order=None) -> LinkDiagram:
    """Turn x+/x- into geometric crossings using the orientation's directions."""
    placeholder = [(OVER_R if k in ("x+", "x-") else k, p) for k, p in events]
    D = LinkDiagram(placeholder)  # canonical orientation: signs refer to it
    geo = []
    for k, (kind, p) in enumerate(events):
        if kind in ("x+", "x-"):
            d = D.event_info[k]
            same = d["BLTR"][1] == d["BRTL"][1]
            positive = kind == "x+"
            geo.append((OVER_R if positive == same else OVER_L, p))
        else:
            geo.append((kind, p))
    return LinkDiagram(geo, reversed, order)


_ALIASES = {"x+": "x+", "x-": "x-", "pos": "x+", "neg": "x-", "pos_crossing": "x+", "neg_crossing": "x-",
            "cup": CUP, "cap": CAP, "/": OVER_R, "\\": OVER_L}


def _norm_kind(kind: str) -> str:
    k = str(kind).strip().lower()
    if k not in _ALIASES:
        raise LinkParseError(f"unknown event kind {kind!r}")
    return _ALIASES[k]


def parse_diagram(src) -> LinkDiagram:
    """Parse JSON (dict or string) or the one-event-per-line text form."""
    reversed_ = order = None
    if isinstance(src, LinkDiagram):
        return src
    if isinstance(src, (list, tuple)):
        events = [(_norm_kind(k), int(p)) for k, p in src]
    else:
        obj = src
        if isinstance(src, str):
            text = src.strip()
            if text.startswith("{") or text.startswith("["):
                obj = json.loads(text)
            else:
                events = []
                for ln, line in enumerate(text.splitlines(), 1):
                    line = line.split("#", 1)[0].strip()
                    if not line:
                        continue
                    parts = line.replace("(", " ").replace(")", " ").replace(",", " ").split()
                    if len(parts) != 2:
                        raise LinkParseError(f"line {ln}: expected '<kind> <pos>', got {line!r}")
                    try:
                        events.append((_norm_kind(parts[0]), int(parts[1])))
                    except ValueError:
                        raise LinkParseError(f"line {ln}: bad position {parts[1]!r}") from None
                obj = None
        if obj is not None:
            if isinstance(obj, list):
                obj = {"events": obj}
            try:
                events = [(_norm_kind(e["kind"]), int(e["pos"])) for e in obj["events"]]
            except (KeyError, TypeError) as exc:
                raise LinkParseError(f"malformed link JSON: {exc}") from None
            reversed_ = obj.get("reversed")
            order = obj.get("order")
    return _resolve_signed(events, reversed_, order)


# ---------------------------------------------------------------------------
# linking data


@dataclass(frozen=True)
class LinkingData:
    matrix: tuple[tuple[int, ...], ...]
    b_minus: int

    @property
    def n(self) -> int:
        return len(self.matrix)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "b_minus": self.b_minus}


def linking_data(L: LinkDiagram) -> LinkingData:
    n = L.n_components
    twice = [[0] * n for _ in range(n)]
    for _, c1, c2, s in L.crossing_signs():
        if c1 == c2:
            twice[c1][c1] += 2 * s
        else:
            twice[c1][c2] += s
            twice[c2][c1] += s
    M = tuple(tuple(x // 2 for x in row) for row in twice)
    _, neg, _ = symmetric_inertia(M) if n else (0, 0, 0)
    return LinkingData(M, neg)


def writhes(L: LinkDiagram) -> list[int]:
    return [linking_data(L).matrix[c][c] for c in range(L.n_components)]


# ---------------------------------------------------------------------------
# builders


def empty() -> LinkDiagram:
    return LinkDiagram([])


def unknot(framing: int = 0) -> LinkDiagram:
    """Round unknot with |framing| kinks; surgery gives L(framing, 1)."""
    sign = "x+" if framing > 0 else "x-"
    return parse_diagram([("cup", 0)] + [(sign, 0)] * abs(framing) + [("cap", 0)])


def hopf_link(f1: int = 0, f2: int = 0) -> LinkDiagram:
    ev = [("cup", 0), ("cup", 2)]
    ev += [("x+" if f1 > 0 else "x-", 0)] * abs(f1)
    ev += [("x+" if f2 > 0 else "x-", 2)] * abs(f2)
    ev += [("x+", 1), ("x+", 1), ("cap", 2), ("cap", 0)]
    return parse_diagram(ev)


def chain(k: int, framings=None) -> LinkDiagram:
    """k unknots, each clasped with the next (width at most 4)."""
    if k < 1:
        return empty()
    framings = list(framings or [0] * k)
    ev = [("cup", 0)]
    ev += [("x+" if framings[0] > 0 else "x-", 0)] * abs(framings[0])
    for c in range(1, k):
        f = framings[c]
        ev += [("cup", 2)]
        ev += [("x+" if f > 0 else "x-", 2)] * abs(f)
        ev += [("x+", 1), ("x+", 1), ("cap", 0)]
    ev += [("cap", 0)]
    return parse_diagram(ev)


def trefoil(sign: int = 1) -> LinkDiagram:
    """Plat closure of a threefold twist; blackboard framing is its writhe."""
    x = "x+" if sign > 0 else "x-"
    return parse_diagram([("cup", 0), ("cup", 2), (x, 1), (x, 1), (x, 1), ("cap", 2), ("cap", 0)])


def _concat(A: LinkDiagram, B: LinkDiagram) -> LinkDiagram:
    nA = A.n_components
    order = tuple(A.order) + tuple(nA + o for o in B.order)
    return LinkDiagram(A.events + B.events, tuple(A.reversed) + tuple(B.reversed), order)


def disjoint_union(A: LinkDiagram, B: LinkDiagram) -> LinkDiagram:
    """B drawn above A; components of B are numbered after those of A."""
    return _concat(A, B)


def stabilize(L: LinkDiagram, sign: int) -> LinkDiagram:
    """Add a distant unknot with framing sign (+1 or -1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return _concat(L, unknot(sign))


# ---------------------------------------------------------------------------
# handle slides


def _first_last(L: LinkDiagram, c: int) -> tuple[int, int]:
    ks = [s.event for s in L.traversals[c]]
    return min(ks), max(ks)


def _desired_senses(L: LinkDiagram) -> dict:
    """Map event index of each cup to (component, sense) in L's orientation."""
    return {k: (d["comp"], d["sense"]) for k, d in enumerate(L.event_info) if L.events[k][0] == CUP}


def _rebuild(events, cup_targets: dict, n_expected: int | None = None) -> LinkDiagram:
    """Diagram on ``events`` with orientations and numbering taken from cup_targets.

    cup_targets maps new cup indices to (user component, desired sense); every
    component must contain at least one listed cup.
    """
    base = LinkDiagram(events)
    n = base.n_components
    comp_user = {}
    flip = {}
    for k, (u, sense) in cup_targets.items():
        c = base.event_info[k]["comp"]
        comp_user.setdefault(c, u)
        if comp_user[c] != u:
            raise AssertionError("cups of one component map to different components")
        flip[c] = base.event_info[k]["sense"] != sense
    if sorted(comp_user.values()) != list(range(n)):
        raise AssertionError("component relabelling is not a bijection")
    if n_expected is not None and n != n_expected:
        raise AssertionError("unexpected component count")
    order = [0] * n
    rev = [False] * n
    for c, u in comp_user.items():
        order[u] = c
        rev[u] = flip[c]
    return LinkDiagram(events, rev, order)


def _delay_last_cap(L: LinkDiagram, c: int, after: int) -> LinkDiagram:
    """Isotopy: move component c's last cap to just after event ``after``.

    The two strands entering the cap are dragged over everything to the right
    edge, kept there, and capped later.
    """
    last = max(k for k, (kind, _) in enumerate(L.events) if kind == CAP and L.event_info[k]["comp"] == c)
    states = L.slot_states()
    p = L.events[last][1]
    width = len(states[last])
    new = list(L.events[:last])
    pos = p
    for _ in range(p + 2, width):
        new += [(OVER_R, pos + 1), (OVER_R, pos)]
        pos += 1
    mid = list(L.events[last + 1:after + 1])
    new += mid
    new.append((CAP, len(states[after + 1])))
    new += list(L.events[after + 1:])
    targets = {}
    senses = _desired_senses(L)
    for k, v in senses.items():
        if k < last:
            targets[k] = v
        elif k > last:
            shift = 2 * (width - p - 2)
            targets[k + shift - 1 + (1 if k > after else 0)] = v
    return _rebuild(new, targets, L.n_components)


def _double(L: LinkDiagram, j: int):
    """Insert a blackboard push-off of component j; returns (events, cup targets, j' cups)."""
    states = L.slot_states()
    info = L.event_info
    new = []
    targets = {}
    jp_cups = []
    J = L.n_components  # temporary label of the push-off

    for k, (kind, p) in enumerate(L.events):
        st = states[k]
        before = lambda s: s + sum(1 for q in range(s) if st[q][0] == j)
        P = before(p)
        if kind == CUP:
            c, sense = info[k]["comp"], info[k]["sense"]
            if c != j:
                targets[len(new)] = (c, sense)
                new.append((CUP, P))
            else:
                outer_is_copy = sense == "cw"
                targets[len(new)] = (J if outer_is_copy else j, sense)
                new.append((CUP, P))
                targets[len(new)] = (j if outer_is_copy else J, sense)
                new.append((CUP, P + 1))
                jp_cups.append(len(new) - (2 if outer_is_copy else 1))
        elif kind == CAP:
            if info[k]["comp"] != j:
                new.append((CAP, P))
            else:
                new += [(CAP, P + 1), (CAP, P)]
        else:
            lj, rj = st[p][0] == j, st[p + 1][0] == j
            if not lj and not rj:
                new.append((kind, P))
            elif lj and not rj:
                new += [(kind, P + 1), (kind, P)]
            elif rj and not lj:
                new += [(kind, P), (kind, P + 1)]
            else:
                new += [(kind, P + 1), (kind, P), (kind, P + 2), (kind, P + 1)]
    return new, targets, jp_cups


def handle_slide(L: LinkDiagram, i: int, j: int) -> LinkDiagram:
    """Slide component i over component j along a flat band.

    The result keeps the numbering and orientations of L; component i becomes
    the orientation-respecting band sum of i with a blackboard push-off of j,
    so its linking row becomes row_i + row_j.
    """
    n = L.n_components
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidComponent(f"components must lie in 0..{n - 1}")
    if i == j:
        raise InvalidComponent("cannot slide a component over itself")
    fi, li = _first_last(L, i)
    fj, lj = _first_last(L, j)
    if li < fj:
        L = _delay_last_cap(L, i, fj)
    elif lj < fi:
        L = _delay_last_cap(L, j, fi)

    events, targets, jp_cups = _double(L, j)
    J = n
    D2 = _rebuild(events, targets, n + 1)
    states = D2.slot_states()

    best = None
    for t, st in enumerate(states):
        ups = [a for a, (c, up) in enumerate(st) if c == i and up]
        downs = [b for b, (c, up) in enumerate(st) if c == J and not up]
        for a in ups:
            for b in downs:
                if best is None or abs(a - b) < best[0]:
                    best = (abs(a - b), t, a, b)
        if best is not None:
            break
    if best is None:
        raise InvalidComponent("components never meet; cannot place the band")
    _, t, a, b = best
    band = []
    if a < b:
        band += [(OVER_R, s) for s in range(a, b - 1)]
        band += [(CAP, b - 1), (CUP, b - 1)]
        band += [(OVER_L, s) for s in range(b - 2, a - 1, -1)]
    else:
        band += [(OVER_L, s) for s in range(a - 1, b, -1)]
        band += [(CAP, b), (CUP, b)]
        band += [(OVER_R, s) for s in range(b + 1, a)]
    new = events[:t] + band + events[t:]
    shift = len(band)
    final_targets = {}
    for k, (u, sense) in targets.items():
        u = i if u == J else u
        final_targets[k if k < t else k + shift] = (u, sense)
    return _rebuild(new, final_targets, n)


# ---------------------------------------------------------------------------
# shorthand


def parse_link_spec(text: str) -> LinkDiagram:
    """'unknot:<f>', 'hopf:<f1>,<f2>', 'trefoil', 'chain:<k>', '@file', or a literal diagram."""
    t = text.strip()
    if t.startswith("@"):
        with open(t[1:], encoding="utf-8") as fh:
            return parse_diagram(fh.read())
    head, _, arg = t.partition(":")
    head = head.lower()
    try:
        if head == "unknot":
            return unknot(int(arg or 0))
        if head == "hopf":
            f = [int(x) for x in arg.split(",")] if arg else [0, 0]
            if len(f) != 2:
                raise LinkParseError("hopf needs two framings")
            return hopf_link(*f)
        if head == "chain":
            return chain(int(arg or 2))
        if head == "trefoil":
            return trefoil(int(arg) if arg else 1)
        if head == "empty":
            return empty()
    except ValueError:
        raise LinkParseError(f"bad link shorthand {text!r}") from None
    return parse_diagram(t)
