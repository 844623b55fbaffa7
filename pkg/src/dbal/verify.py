"""Theorem verifiers and the corpus runner.

Each verifier checks the hypotheses of one statement, computes the verdict
the statement predicts from factor-level conditions, and compares it with
the verdict observed by brute force on the explicitly built graph.  The
observed side always comes from :func:`metrics.is_l_distance_balanced` (or
a direct W-set count) on the product itself.
"""
from __future__ import annotations

import hashlib
import logging
import multiprocessing
import re
import shlex
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import __version__
from .graphcore import (
    Graph,
    MAX_ENUM_N,
    enumerate_all,
    enumerate_connected,
    generate,
    parse_graph6,
)
from .metrics import (
    Balance,
    classify_join_of_regulars,
    equal_degrees_at_distance,
    is_l_distance_balanced,
    is_locally_regular,
    JoinClass,
    prop_char_sums,
    w_sizes,
)
from .products import (
    cart_membership_table,
    cartesian,
    check_distance_formula,
    corona,
    corona_condition_iii,
    eq3_counts,
    lex_w_count,
    lexicographic,
)

log = logging.getLogger(__name__)

SINGLE_CHECKS = ("cor-4.2", "claim-4.4", "claim-4.4-sym", "prop-6.1", "cor-6.2")
LEX_CHECKS = ("lex-3.2", "lemma-3.1", "eq-2")
CORONA_CHECKS = ("prop-4.1", "lemma-4.3", "thm-4.4i", "thm-4.4ii", "corona-law")
CART_CHECKS = ("thm-5.2", "prop-5.3", "cor-5.4", "lemma-5.1", "eq-1")
THEOREMS = (
    "lex-3.2", "lemma-3.1", "eq-2",
    "prop-4.1", "cor-4.2", "lemma-4.3", "thm-4.4i", "thm-4.4ii", "claim-4.4", "claim-4.4-sym", "corona-law",
    "thm-5.2", "prop-5.3", "cor-5.4", "lemma-5.1", "eq-1",
    "prop-6.1", "cor-6.2",
)

PASS, FAIL, SKIP = "pass", "fail", "skipped"
UNCONSTRAINED = "unconstrained"
DEFAULT_MAX_VERTICES = 60


class SweepSpecError(ValueError):
    pass


@dataclass
class InstanceResult:
    theorem: str
    inputs: dict[str, str]
    params: dict[str, int]
    status: str
    predicted: str | None = None
    observed: str | None = None
    witness: dict | None = None
    reason: str | None = None

    @property
    def agree(self) -> bool | None:
        if self.status == SKIP:
            return None
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "inputs": dict(self.inputs),
            "params": dict(self.params),
            "status": self.status,
            "predicted": self.predicted,
            "observed": self.observed,
            "agree": self.agree,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out

    def digest_line(self) -> str:
        ins = ";".join(f"{k}={v}" for k, v in self.inputs.items())
        ps = ";".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.theorem}|{ins}|{ps}|{self.status}|{self.predicted}|{self.observed}\n"


def replay_command(theorem: str, inputs: dict[str, str], params: dict[str, int]) -> str:
    parts = ["dbal", "verify", "--check", theorem]
    for key in ("G", "H"):
        if key in inputs:
            parts += [f"--{key.lower()}", inputs[key]]
    for key in ("n", "l", "v"):
        if key in params:
            parts += [f"--{key}", str(params[key])]
    return " ".join(shlex.quote(p) for p in parts)


def _skip(theorem, inputs, params, reason):
    return InstanceResult(theorem, inputs, params, SKIP, reason=reason)


def _judge(theorem, inputs, params, predicted, observed, agree=None, witness=None):
    ok = (predicted == observed) if agree is None else agree
    if ok:
        return InstanceResult(theorem, inputs, params, PASS, predicted, observed)
    w = dict(witness or {})
    w["replay"] = replay_command(theorem, inputs, params)
    return InstanceResult(theorem, inputs, params, FAIL, predicted, observed, w)


def _verdict(ok: bool) -> str:
    return Balance.BALANCED.value if ok else Balance.UNBALANCED.value


def _wanted(checks, group):
    return [t for t in group if checks is None or t in checks]


def _too_big(n_vertices, max_vertices):
    return max_vertices is not None and n_vertices > max_vertices


# --- lexicographic -----------------------------------------------------------


def verify_lex(G: Graph, H: Graph, l: int | None = None, checks=None,
               max_vertices: int | None = DEFAULT_MAX_VERTICES) -> list[InstanceResult]:
    """``G[H]`` is l-balanced iff ``G`` is, for ``l >= 3`` and ``G != K1``.

    Also checks the W-count identity for pairs at distance >= 3 and the
    lexicographic distance formula on the built product.
    """
    want = _wanted(checks, LEX_CHECKS)
    inputs = {"G": G.graph6, "H": H.graph6}
    if not want:
        return []
    DG = G.distances
    if not DG.connected or G.n < 2:
        reason = "G disconnected" if not DG.connected else "G is K1"
        ls = [l] if l is not None else []
        out = [_skip("lex-3.2", inputs, {"l": x}, reason) for x in ls if "lex-3.2" in want]
        out += [_skip(t, inputs, {}, reason) for t in ("lemma-3.1", "eq-2") if t in want]
        return out
    if _too_big(G.n * H.n, max_vertices):
        ls = [l] if l is not None else list(range(3, int(DG.diameter) + 1))
        out = [_skip("lex-3.2", inputs, {"l": x}, "budget") for x in ls if "lex-3.2" in want]
        out += [_skip(t, inputs, {}, "budget") for t in ("lemma-3.1", "eq-2") if t in want]
        return out
    P = lexicographic(G, H)
    X = P.graph
    DX = X.distances
    out = []
    if "lex-3.2" in want:
        ls = [l] if l is not None else range(3, int(DG.diameter) + 1)
        for x in ls:
            params = {"l": x}
            if x < 3:
                out.append(_skip("lex-3.2", inputs, params, "l < 3"))
                continue
            pg = is_l_distance_balanced(G, x, DG)
            px = is_l_distance_balanced(X, x, DX)
            # l > diam(G) must leave G[H] without pairs at distance l as well
            out.append(_judge("lex-3.2", inputs, params, pg.status.value, px.status.value,
                              witness={"G_pair": pg.witness, "product_pair": px.witness,
                                       "product_pair_vertices": px.witness and [P.vertex(i) for i in px.witness]}))
    if "lemma-3.1" in want:
        if DG.diameter < 3:
            out.append(_skip("lemma-3.1", inputs, {}, "no pair at distance >= 3"))
        else:
            bad = None
            m = H.n
            for g1 in range(G.n):
                for g2 in range(G.n):
                    if g1 == g2 or DG.d[g1][g2] < 3:
                        continue
                    pred = lex_w_count(G, H, g1, g2, DG)
                    for h1 in range(m):
                        for h2 in range(m):
                            obs = w_sizes(DX, g1 * m + h1, g2 * m + h2)[0]
                            if obs != pred and bad is None:
                                bad = {"g1": g1, "g2": g2, "h1": h1, "h2": h2, "count": pred, "brute_force": obs}
            out.append(_judge("lemma-3.1", inputs, {}, "equal", "equal" if bad is None else "mismatch", witness=bad))
    if "eq-2" in want:
        out.append(_distance_check("eq-2", P, inputs, {}))
    return out


def _distance_check(theorem, P, inputs, params):
    bad = check_distance_formula(P)
    w = None
    if bad is not None:
        i, j, got, formula = bad
        w = {"pair": [list(P.vertex(i)), list(P.vertex(j))], "bfs": got, "formula": formula}
    return _judge(theorem, inputs, params, "match", "match" if bad is None else "mismatch", witness=w)


# --- corona ------------------------------------------------------------------


def corona_predicted(G: Graph, l: int) -> tuple[bool, dict]:
    """Factor-level prediction for l-balance of a corona over ``G`` (|V(G)| >= 2, 3 <= l <= diam+2).

    A condition about a distance with no vertex pairs in ``G`` holds
    vacuously; that is exactly the case split on where the two vertices
    sit in the corona.
    """
    DG = G.distances
    diam = DG.diameter
    cond_i = is_l_distance_balanced(G, l, DG).balanced if l <= diam else True
    cond_ii = is_l_distance_balanced(G, l - 2, DG).balanced
    cond_iii = True
    iii_pair = None
    for a, b in DG.pairs_at(l - 1):
        for g1, g2 in ((a, b), (b, a)):
            left, right = corona_condition_iii(G, g1, g2, DG)
            if left != right:
                cond_iii = False
                iii_pair = (g1, g2, left, right)
                break
        if not cond_iii:
            break
    detail = {"i": cond_i, "ii": cond_ii, "iii": cond_iii, "iii_failure": iii_pair}
    return cond_i and cond_ii and cond_iii, detail


def verify_corona(G: Graph, H: Graph, l: int | None = None, checks=None,
                  max_vertices: int | None = DEFAULT_MAX_VERTICES) -> list[InstanceResult]:
    """All corona statements for one factor pair.

    Without ``l`` every ``l`` in ``3..diam(G)+2`` is covered.
    """
    want = _wanted(checks, CORONA_CHECKS)
    inputs = {"G": G.graph6, "H": H.graph6}
    if not want:
        return []
    DG = G.distances
    if not DG.connected:
        return [_skip(t, inputs, {}, "G disconnected") for t in want]
    if _too_big(G.n * (H.n + 1), max_vertices):
        return [_skip(t, inputs, {}, "budget") for t in want]
    P = corona(G, H)
    X = P.graph
    DX = X.distances
    out = []
    if "prop-4.1" in want:
        out.append(_corona_2db(G, H, X, DX, inputs))
    if G.n < 2:
        out += [_skip(t, inputs, {}, "G is K1") for t in want if t not in ("prop-4.1", "corona-law")]
    else:
        diam = int(DG.diameter)
        ls = [l] if l is not None else range(3, diam + 3)
        for x in ls:
            params = {"l": x}
            if not 3 <= x <= diam + 2:
                out += [_skip(t, inputs, params, "l outside 3..diam(G)+2")
                        for t in ("lemma-4.3", "thm-4.4i", "thm-4.4ii") if t in want]
                continue
            obs = is_l_distance_balanced(X, x, DX)
            if "lemma-4.3" in want:
                pred, detail = corona_predicted(G, x)
                out.append(_judge("lemma-4.3", inputs, params, _verdict(pred), obs.status.value,
                                  witness={"conditions": detail, "product_pair": obs.witness}))
            if "thm-4.4i" in want:
                if x == diam + 2:
                    pred = is_l_distance_balanced(G, diam, DG)
                    out.append(_judge("thm-4.4i", inputs, params, pred.status.value, obs.status.value,
                                      witness={"G_pair": pred.witness, "product_pair": obs.witness}))
                else:
                    out.append(_skip("thm-4.4i", inputs, params, "l != diam(G)+2"))
            if "thm-4.4ii" in want:
                if x <= diam + 1:
                    out.append(_judge("thm-4.4ii", inputs, params, Balance.UNBALANCED.value, obs.status.value,
                                      witness={"product_pair": obs.witness}))
                else:
                    out.append(_skip("thm-4.4ii", inputs, params, "l = diam(G)+2"))
    if "corona-law" in want:
        out.append(_distance_check("corona-law", P, inputs, {}))
    return out


def _corona_2db(G, H, X, DX, inputs):
    if H.n < 2:
        return _skip("prop-4.1", inputs, {}, "|V(H)| < 2")
    if DX.diameter < 2:
        return _skip("prop-4.1", inputs, {}, "diam(G o H) < 2")
    lr, lr_w = is_locally_regular(H)
    pred = G.n == 1 and lr
    obs = is_l_distance_balanced(X, 2, DX)
    return _judge("prop-4.1", inputs, {}, _verdict(pred), obs.status.value,
                  witness={"H_locally_regular": lr, "H_witness": lr_w, "product_pair": obs.witness})


def verify_corona_2db(G: Graph, H: Graph) -> InstanceResult:
    return verify_corona(G, H, checks={"prop-4.1"}, max_vertices=None)[0]


def verify_corona_l(G: Graph, H: Graph, l: int) -> list[InstanceResult]:
    return verify_corona(G, H, l, checks={"lemma-4.3", "thm-4.4i", "thm-4.4ii"}, max_vertices=None)


def verify_universal_vertex(G: Graph, v: int | None = None) -> list[InstanceResult]:
    """``G`` with universal vertex ``v`` is 2-balanced iff ``G - v`` is locally regular."""
    inputs = {"G": G.graph6}
    D = G.distances
    if not D.connected:
        return [_skip("cor-4.2", inputs, {} if v is None else {"v": v}, "G disconnected")]
    vs = G.universal_vertices() if v is None else [v]
    if not vs:
        return [_skip("cor-4.2", inputs, {}, "no universal vertex")]
    out = []
    for u in vs:
        params = {"v": u}
        if not 0 <= u < G.n or G.degree(u) != G.n - 1:
            out.append(_skip("cor-4.2", inputs, params, "v is not universal"))
        elif D.diameter != 2:
            out.append(_skip("cor-4.2", inputs, params, "diam(G) != 2"))
        else:
            lr, lr_w = is_locally_regular(G.delete_vertex(u))
            obs = is_l_distance_balanced(G, 2, D)
            out.append(_judge("cor-4.2", inputs, params, _verdict(lr), obs.status.value,
                              witness={"G_minus_v_witness": lr_w, "pair": obs.witness}))
    return out


def verify_claim(X: Graph, checks=None) -> list[InstanceResult]:
    """Counts of the corona condition for pairs at distance >= 2.

    ``claim-4.4`` is the statement for an ordered pair: the two counts never
    agree.  ``claim-4.4-sym`` is the weaker statement that they cannot agree
    for both orientations of the pair at once.  The parity facts behind it
    (even distance puts a geodesic midpoint in the equidistant class, odd
    distance fills both offset-1 classes) are checked for each pair as well.
    """
    want = _wanted(checks, ("claim-4.4", "claim-4.4-sym"))
    inputs = {"G": X.graph6}
    D = X.distances
    if not D.connected:
        return [_skip(t, inputs, {}, "disconnected") for t in want]
    if D.diameter < 2:
        return [_skip(t, inputs, {}, "no pair at distance >= 2") for t in want]
    ordered_bad = sym_bad = None
    rows = D.d
    for k in range(2, int(D.diameter) + 1):
        for u, v in D.pairs_at(k):
            u2 = u1 = e = v1 = v2 = 0
            for a, b in zip(rows[u], rows[v]):
                off = a - b
                if off <= -2:
                    u2 += 1
                elif off == -1:
                    u1 += 1
                elif off == 0:
                    e += 1
                elif off == 1:
                    v1 += 1
                else:
                    v2 += 1
            # (u, v): |{x: d(u,x)+2 <= d(v,x)}| = U2 against |{x: d(v,x) <= d(u,x)}| = E+V1+V2
            equal_uv = u2 == e + v1 + v2
            equal_vu = v2 == e + u1 + u2
            parity_ok = e > 0 if k % 2 == 0 else (u1 > 0 and v1 > 0)
            sizes = [u2, u1, e, v1, v2]
            if ordered_bad is None and (equal_uv or equal_vu):
                g1, g2 = (u, v) if equal_uv else (v, u)
                left, right = (u2, e + v1 + v2) if equal_uv else (v2, e + u1 + u2)
                ordered_bad = {"g1": g1, "g2": g2, "distance": k, "left": left, "right": right}
            if sym_bad is None and ((equal_uv and equal_vu) or not parity_ok):
                sym_bad = {"u": u, "v": v, "distance": k, "sizes": sizes, "parity_ok": parity_ok}
    out = []
    if "claim-4.4" in want:
        out.append(_judge("claim-4.4", inputs, {}, "unequal", "unequal" if ordered_bad is None else "equal",
                          witness=ordered_bad))
    if "claim-4.4-sym" in want:
        out.append(_judge("claim-4.4-sym", inputs, {}, "unequal", "unequal" if sym_bad is None else "equal",
                          witness=sym_bad))
    return out


# --- cartesian ---------------------------------------------------------------


def verify_cart(n: int, H: Graph, l: int | None = None, checks=None,
                max_vertices: int | None = DEFAULT_MAX_VERTICES) -> list[InstanceResult]:
    """Statements about ``K_n box H``: the counting criterion, necessity of l-balance
    of ``H``, the l = 2 characterization, the layer classification and the additive distance law.
    """

    want = _wanted(checks, CART_CHECKS)
    inputs = {"H": H.graph6}
    base = {"n": n}
    if not want:
        return []
    DH = H.distances
    if n < 2:
        return [_skip(t, inputs, base, "n < 2") for t in want]
    if not DH.connected:
        return [_skip(t, inputs, base, "H disconnected") for t in want]
    if _too_big(n * H.n, max_vertices):
        return [_skip(t, inputs, base, "budget") for t in want]
    P = cartesian(generate("complete", n), H)
    X = P.graph
    DX = X.distances
    diam = int(DH.diameter)
    out = []
    ls = [l] if l is not None else range(2, diam + 1)
    for x in ls:
        params = {"n": n, "l": x}
        if not 2 <= x <= diam:
            out += [_skip(t, inputs, params, "l outside 2..diam(H)")
                    for t in ("thm-5.2", "prop-5.3", "cor-5.4") if t in want]
            continue
        obs = is_l_distance_balanced(X, x, DX)
        h_l = is_l_distance_balanced(H, x, DH)
        h_prev = is_l_distance_balanced(H, x - 1, DH)
        if "thm-5.2" in want:
            if h_l.balanced and h_prev.balanced:
                pred = True
                pair = None
                for h1, h2 in DH.pairs_at(x - 1):
                    left, right = eq3_counts(H, h1, h2, DH)
                    if left != right:
                        pred, pair = False, (h1, h2, left, right)
                        break
                out.append(_judge("thm-5.2", inputs, params, _verdict(pred), obs.status.value,
                                  witness={"eq3_failure": pair, "product_pair": obs.witness}))
            else:
                out.append(_skip("thm-5.2", inputs, params, "H not l- and (l-1)-balanced"))
        if "prop-5.3" in want:
            pred = UNCONSTRAINED if h_l.balanced else Balance.UNBALANCED.value
            agree = not (obs.balanced and not h_l.balanced)
            out.append(_judge("prop-5.3", inputs, params, pred, obs.status.value, agree=agree,
                              witness={"H_pair": h_l.witness}))
        if "cor-5.4" in want:
            if x == 2:
                pred = h_l.balanced and h_prev.balanced
                out.append(_judge("cor-5.4", inputs, params, _verdict(pred), obs.status.value,
                                  witness={"H_2_pair": h_l.witness, "H_1_pair": h_prev.witness,
                                           "product_pair": obs.witness}))
            else:
                out.append(_skip("cor-5.4", inputs, params, "l != 2"))
    if "lemma-5.1" in want:
        table = cart_membership_table(n, H, DH)
        B = np.array(DX.d, dtype=float)
        bfs = np.sign(B[None, :, :] - B[:, None, :]).astype(np.int8)
        bad = np.argwhere(table != bfs)
        w = None
        if len(bad):
            x_, y_, z_ = (int(t) for t in bad[0])
            w = {"x": list(P.vertex(x_)), "y": list(P.vertex(y_)), "z": list(P.vertex(z_)),
                 "layer_rule": int(table[x_, y_, z_]), "bfs": int(bfs[x_, y_, z_])}
        out.append(_judge("lemma-5.1", inputs, base, "agree", "agree" if w is None else "mismatch", witness=w))
    if "eq-1" in want:
        out.append(_distance_check("eq-1", P, inputs, base))
    return out


# --- characterization by shell sums ------------------------------------------


def verify_char(G: Graph, l: int | None = None, checks=None) -> list[InstanceResult]:
    """l-balance versus equal shell sums, and the diameter-2 degree/join triangle."""
    want = _wanted(checks, ("prop-6.1", "cor-6.2"))
    inputs = {"G": G.graph6}
    D = G.distances
    if not D.connected:
        return [_skip(t, inputs, {}, "disconnected") for t in want]
    diam = int(D.diameter)
    out = []
    if "prop-6.1" in want:
        ls = [l] if l is not None else range(1, diam + 1)
        for x in ls:
            params = {"l": x}
            if not 1 <= x <= diam:
                out.append(_skip("prop-6.1", inputs, params, "l outside 1..diam"))
                continue
            obs = is_l_distance_balanced(G, x, D)
            pred, pair = True, None
            for a, b in D.pairs_at(x):
                lhs, rhs = prop_char_sums(G, a, b, D)
                if lhs != rhs:
                    pred, pair = False, (a, b, lhs, rhs)
                    break
            out.append(_judge("prop-6.1", inputs, params, _verdict(pred), obs.status.value,
                              witness={"sum_failure": pair, "pair": obs.witness}))
    if "cor-6.2" in want:
        params = {"l": 2}
        if diam != 2 or (l is not None and l != 2):
            out.append(_skip("cor-6.2", inputs, params, "diam(G) != 2"))
        else:
            obs = is_l_distance_balanced(G, 2, D)
            deg_ok, deg_pair = equal_degrees_at_distance(G, 2, D)
            cls = classify_join_of_regulars(G)
            agree = obs.balanced == deg_ok == (cls is not JoinClass.NEITHER)
            out.append(_judge("cor-6.2", inputs, params, _verdict(deg_ok), obs.status.value, agree=agree,
                              witness={"classification": cls.value, "degree_pair": deg_pair, "pair": obs.witness}))
    return out


def verify_single(G: Graph, checks=None, l: int | None = None, v: int | None = None) -> list[InstanceResult]:
    """Every single-graph statement selected by ``checks``, in fixed order."""
    want = _wanted(checks, SINGLE_CHECKS)
    out = []
    if "cor-4.2" in want:
        out += verify_universal_vertex(G, v)
    if "claim-4.4" in want or "claim-4.4-sym" in want:
        out += verify_claim(G, want)
    if "prop-6.1" in want or "cor-6.2" in want:
        out += verify_char(G, l, want)
    return out


# --- sweeps ------------------------------------------------------------------


_RANGE = re.compile(r"^\s*(?:(\d+)\s*<=\s*)?n\s*(<=|=)\s*(\d+)\s*$")


def parse_range(text: str) -> tuple[int, int]:
    """``n<=K``, ``n=K`` or ``A<=n<=B`` as an inclusive ``(lo, hi)``."""
    m = _RANGE.match(text)
    if not m:
        raise SweepSpecError(f"bad size range {text!r}; use n<=K, n=K or A<=n<=B")
    lo, op, hi = m.group(1), m.group(2), int(m.group(3))
    if op == "=":
        if lo is not None:
            raise SweepSpecError(f"bad size range {text!r}")
        return hi, hi
    return (int(lo) if lo is not None else 1), hi


@dataclass(frozen=True)
class SizeSource:
    lo: int
    hi: int
    connected: bool


@dataclass(frozen=True)
class SweepSpec:
    """Parsed sweep: ``connected:n<=K`` or keyed parts ``G:..``, ``H:..``, ``K:..``."""

    G: SizeSource | None = None
    H: SizeSource | None = None
    K: tuple[int, int] | None = None

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts: dict[str, object] = {}
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            key, sep, rest = chunk.partition(":")
            if not sep:
                raise SweepSpecError(f"bad sweep part {chunk!r}")
            key = key.strip()
            qual = None
            head, sep2, tail = rest.partition(":")
            if sep2 and head.strip() in ("connected", "all"):
                qual, rest = head.strip(), tail
            if key == "connected":
                key, qual = "G", "connected"
            if key not in ("G", "H", "K") or key in parts:
                raise SweepSpecError(f"bad or repeated sweep key {key!r}")
            lo, hi = parse_range(rest)
            if key == "K":
                parts[key] = (lo, hi)
            else:
                if key == "G" and qual == "all":
                    raise SweepSpecError("G ranges over connected graphs only")
                parts[key] = (lo, hi, qual)
        if not parts:
            raise SweepSpecError("empty sweep spec")
        for key in ("G", "H"):
            if key in parts:
                lo, hi, qual = parts[key]
                if not 1 <= lo <= hi <= MAX_ENUM_N:
                    raise SweepSpecError(f"{key} sizes must lie in 1..{MAX_ENUM_N}")
        if "K" in parts and parts["K"][0] < 1:
            raise SweepSpecError("K sizes must be positive")
        g = parts.get("G")
        h = parts.get("H")
        return cls(
            G=SizeSource(g[0], g[1], True) if g else None,
            H=SizeSource(h[0], h[1], h[2] == "connected" if h[2] else None) if h else None,
            K=parts.get("K"),
        )


def _mask_chunks(n: int, chunk: int) -> Iterator[tuple[int, int]]:
    total = 1 << (n * (n - 1) // 2)
    for lo in range(0, total, chunk):
        yield lo, min(lo + chunk, total)


SINGLE_CHUNK = 1 << 13
MAX_LISTED_FAILURES = 1000  # failing instances spelled out per report; counts and digest cover all
H_CHUNK = 1 << 12


def sweep_units(spec: SweepSpec, checks: Sequence[str]) -> list[tuple]:
    """Deterministic work units for a sweep; independent of the worker count."""
    units: list[tuple] = []
    single = [c for c in checks if c in SINGLE_CHECKS]
    pair = [c for c in checks if c in LEX_CHECKS or c in CORONA_CHECKS]
    cart = [c for c in checks if c in CART_CHECKS]
    if spec.G and not spec.H and single:
        for n in range(spec.G.lo, spec.G.hi + 1):
            for lo, hi in _mask_chunks(n, SINGLE_CHUNK):
                units.append(("single", ("enum", n, lo, hi, True)))
    if spec.G and spec.H and pair:
        hconn = bool(spec.H.connected)
        for n in range(spec.G.lo, spec.G.hi + 1):
            for G in enumerate_connected(n):
                for hn in range(spec.H.lo, spec.H.hi + 1):
                    for lo, hi in _mask_chunks(hn, H_CHUNK):
                        units.append(("pair", G.graph6, ("enum", hn, lo, hi, hconn)))
    if spec.K and spec.H and cart:
        hconn = True if spec.H.connected is None else spec.H.connected
        for k in range(spec.K[0], spec.K[1] + 1):
            for hn in range(spec.H.lo, spec.H.hi + 1):
                for lo, hi in _mask_chunks(hn, H_CHUNK):
                    units.append(("cart", k, ("enum", hn, lo, hi, hconn)))
    if not units and not _sweep_has_checks(spec, single, pair, cart):
        raise SweepSpecError("none of the selected checks applies to this sweep")
    return units


def _sweep_has_checks(spec, single, pair, cart):
    return bool((spec.G and not spec.H and single) or (spec.G and spec.H and pair) or (spec.K and spec.H and cart))


def graph_units(checks: Sequence[str], G_graphs: Sequence[Graph] = (), H_graphs: Sequence[Graph] = (),
                n: int | None = None) -> list[tuple]:
    """Work units for explicit inputs (single instance or graph6 corpora)."""
    units = []
    single = [c for c in checks if c in SINGLE_CHECKS]
    pair = [c for c in checks if c in LEX_CHECKS or c in CORONA_CHECKS]
    cart = [c for c in checks if c in CART_CHECKS]
    if single and G_graphs:
        units += [("single", ("g6", (G.graph6,))) for G in G_graphs]
    if pair and G_graphs and H_graphs:
        hs = tuple(H.graph6 for H in H_graphs)
        units += [("pair", G.graph6, ("g6", hs)) for G in G_graphs]
    if cart and H_graphs:
        if n is None:
            raise SweepSpecError("cartesian checks need --n (order of the complete factor)")
        units += [("cart", n, ("g6", tuple(H.graph6 for H in H_graphs)))]
    if not units:
        raise SweepSpecError("none of the selected checks applies to the given inputs")
    return units


def _graphs(source) -> Iterator[Graph]:
    if source[0] == "g6":
        for s in source[1]:
            yield parse_graph6(s)
    else:
        _, n, lo, hi, connected = source
        yield from (enumerate_connected if connected else enumerate_all)(n, lo, hi)


@dataclass
class UnitResult:
    counts: dict[str, list[int]]
    failures: list[dict]
    digest: str
    instances: int
    budget_hits: int
    listed: list[dict] = field(default_factory=list)


def evaluate_unit(unit, checks: Sequence[str], l: int | None = None, v: int | None = None,
                  max_vertices: int | None = DEFAULT_MAX_VERTICES, keep_all: bool = False) -> UnitResult:
    """Run the selected checks over one unit; pure, so units may run in any process."""
    kind = unit[0]
    chk = frozenset(checks)
    counts: dict[str, list[int]] = {}
    failures: list[dict] = []
    listed: list[dict] = []
    h = hashlib.sha256()
    total = 0
    budget_hits = 0

    def consume(results: Iterable[InstanceResult]):
        nonlocal total, budget_hits
        for r in results:
            c = counts.setdefault(r.theorem, [0, 0, 0])
            if r.status == SKIP:
                c[1] += 1
                if r.reason == "budget":
                    budget_hits += 1
            else:
                c[0] += 1
                if r.status == FAIL:
                    c[2] += 1
                    if len(failures) < MAX_LISTED_FAILURES:
                        failures.append(r.to_dict())
            if keep_all:
                listed.append(r.to_dict())
            h.update(r.digest_line().encode())
            total += 1

    if kind == "single":
        for G in _graphs(unit[1]):
            consume(verify_single(G, chk, l, v))
    elif kind == "pair":
        G = parse_graph6(unit[1])
        for H in _graphs(unit[2]):
            consume(verify_lex(G, H, l, chk, max_vertices))
            consume(verify_corona(G, H, l, chk, max_vertices))
    elif kind == "cart":
        for H in _graphs(unit[2]):
            consume(verify_cart(unit[1], H, l, chk, max_vertices))
    else:
        raise ValueError(f"unknown unit kind {kind!r}")
    return UnitResult(counts, failures, h.hexdigest(), total, budget_hits, listed)


def _run_unit(args):
    unit, checks, l, v, max_vertices, keep_all = args
    return evaluate_unit(unit, checks, l, v, max_vertices, keep_all)


@dataclass
class Budget:
    max_vertices: int | None = DEFAULT_MAX_VERTICES
    max_instances: int | None = None

    @classmethod
    def parse(cls, text: str | None) -> "Budget":
        """``vertices=60,instances=100000``; a bare integer sets ``vertices``."""
        b = cls()
        if not text:
            return b
        for part in text.split(","):
            key, sep, val = part.partition("=")
            if not sep:
                key, val = "vertices", key
            try:
                num = int(val)
            except ValueError:
                raise SweepSpecError(f"bad budget value {part!r}") from None
            if num <= 0:
                raise SweepSpecError("budgets must be positive")
            if key.strip() == "vertices":
                b.max_vertices = num
            elif key.strip() == "instances":
                b.max_instances = num
            else:
                raise SweepSpecError(f"unknown budget key {key!r}")
        return b


@dataclass
class VerificationReport:
    command: str
    checks: list[str]
    instances: list[dict]
    by_theorem: dict[str, dict[str, int]]
    digest: str
    units: int
    budget_exceeded: bool
    truncated: bool
    wall_time_ms: int
    failures_listed: int = 0

    @property
    def checked(self) -> int:
        return sum(c["checked"] for c in self.by_theorem.values())

    @property
    def skipped(self) -> int:
        return sum(c["skipped"] for c in self.by_theorem.values())

    @property
    def failed(self) -> int:
        return sum(c["failed"] for c in self.by_theorem.values())

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "command": self.command,
            "instances": self.instances,
            "summary": {
                "checked": self.checked,
                "skipped": self.skipped,
                "failed": self.failed,
                "checks": list(self.checks),
                "by_theorem": self.by_theorem,
                "units": self.units,
                "digest": self.digest,
                "budget_exceeded": self.budget_exceeded,
                "truncated": self.truncated,
                "failures_listed": self.failures_listed,
            },
            "wall_time_ms": self.wall_time_ms,
        }


def run_corpus(units: Sequence[tuple], checks: Sequence[str], *, l: int | None = None, v: int | None = None,
               budget: Budget | None = None, jobs: int = 1, command: str = "verify",
               list_all: bool = False) -> VerificationReport:
    """Evaluate ``units`` (optionally in a process pool) and reduce in unit order.

    The report lists failing instances, at most ``MAX_LISTED_FAILURES`` of
    them (every instance with ``list_all``), and a SHA-256 digest over all
    instances, so two runs can be compared
    without storing millions of records.
    """
    unknown = [c for c in checks if c not in THEOREMS]
    if unknown:
        raise SweepSpecError(f"unknown check id(s): {', '.join(unknown)}")
    budget = budget or Budget()
    t0 = time.perf_counter()
    args = [(u, tuple(checks), l, v, budget.max_vertices, list_all) for u in units]
    counts = {t: [0, 0, 0] for t in THEOREMS if t in checks}
    instances: list[dict] = []
    digest = hashlib.sha256()
    seen = 0
    budget_hits = 0
    truncated = False
    listed_failures = 0
    done = 0
    pool = None
    try:
        if jobs > 1 and len(args) > 1:
            pool = multiprocessing.get_context("fork").Pool(jobs)
            results = pool.imap(_run_unit, args, chunksize=1)
        else:
            results = map(_run_unit, args)
        for res in results:
            done += 1
            for t, c in res.counts.items():
                acc = counts.setdefault(t, [0, 0, 0])
                for i in range(3):
                    acc[i] += c[i]
            if list_all:
                instances.extend(res.listed)
            else:
                room = MAX_LISTED_FAILURES - listed_failures
                instances.extend(res.failures[:room])
                listed_failures += min(room, len(res.failures))
            digest.update(res.digest.encode())
            seen += res.instances
            budget_hits += res.budget_hits
            if budget.max_instances is not None and seen >= budget.max_instances and done < len(args):
                truncated = True
                break
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()
    by_theorem = {t: {"checked": c[0], "skipped": c[1], "failed": c[2]}
                  for t, c in sorted(counts.items(), key=lambda kv: THEOREMS.index(kv[0]))}
    wall = int((time.perf_counter() - t0) * 1000)
    log.info("evaluated %d of %d units, %d instances in %d ms", done, len(args), seen, wall)
    return VerificationReport(command, list(checks), instances, by_theorem, digest.hexdigest(),
                              done, budget_hits > 0 or truncated, truncated, wall,
                              sum(1 for i in instances if i["status"] == FAIL))
