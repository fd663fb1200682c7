"""Named verification suites and their text / JSON reports."""

from __future__ import annotations

import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from sympy import isprime

STATUSES = ("pass", "fail", "anomaly", "skipped")
SUITES = ("heisenberg", "nieto", "quartics", "desmic", "jinv", "groups", "dictionary")


class UnknownSuite(ValueError):
    pass


class UnsupportedPrime(ValueError):
    pass


@dataclass
class CheckRecord:
    id: str
    description: str
    status: str
    expected: str
    observed: str
    millis: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")


@dataclass
class Config:
    primes: tuple = (7, 11, 13)
    prime: int = 11  # single-prime checks (the desmic census)
    seed: int = 42
    samples: int | None = None  # overrides every per-check default when set
    cd: tuple = (1, 2)
    threads: int = 1
    timings: bool = False  # millis stay 0 unless asked, so reports are reproducible

    def count(self, default: int) -> int:
        return self.samples if self.samples is not None else default

    def census_primes(self) -> list:
        return [p for p in self.primes if p >= 11] or list(self.primes)

    def to_json(self) -> dict:
        return {
            "primes": list(self.primes),
            "prime": self.prime,
            "seed": self.seed,
            "samples": self.samples,
            "cd": f"{self.cd[0]}:{self.cd[1]}",
        }


def default_threads() -> int:
    raw = os.environ.get("KUMMERLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"KUMMERLAB_THREADS must be an integer, got {raw!r}") from None


def check_prime(p) -> int:
    if not isinstance(p, int) or not isprime(p) or not 7 <= p <= 101:
        raise UnsupportedPrime(f"unsupported prime {p!r} (need a prime 7 <= p <= 101)")
    return p


class _Recorder:
    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.records = []

    def check(self, id, description, expected, fn):
        """fn() returns observed, or (observed, status); by default pass iff observed == expected."""
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:  # a crash is a failed claim, not a crashed run
            out = (f"error: {type(exc).__name__}: {exc}", "fail")
        ms = int(1000 * (time.perf_counter() - t0)) if self.cfg.timings else 0
        observed, status = out if isinstance(out, tuple) else (out, None)
        observed, expected = str(observed), str(expected)
        if status is None:
            status = "pass" if observed == expected else "fail"
        self.records.append(CheckRecord(id, description, status, expected, observed, ms))

    def skip(self, id, description, why):
        self.records.append(CheckRecord(id, description, "skipped", "", why, 0))


def _ratio(ok, total) -> str:
    return f"{ok}/{total}"


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# suites


def _suite_heisenberg(rec: _Recorder):
    from .heisenberg import (
        character_eigenlines,
        group_elements,
        in_span,
        invariant_subspace,
        representation_defects,
        wedge_eigenbasis,
    )
    from .quartics import q_basis

    rec.check("heisenberg.order", "group order", 32, lambda: len(group_elements()))
    rec.check("heisenberg.representation", "U(g)U(h) = U(gh) on all pairs", "1024/1024",
              lambda: _ratio(1024 - len(representation_defects()), 1024))

    def inv4():
        basis = invariant_subspace(4)
        return f"dim {len(basis)}, q0..q4 in span: {all(in_span(q, basis) for q in q_basis())}"

    rec.check("heisenberg.invariants.d4", "degree-4 invariants",
              "dim 5, q0..q4 in span: True", inv4)

    def eig():
        lines = character_eigenlines(2)
        return f"{len(lines)} eigenlines, {len({a for a, _ in lines})} characters"

    rec.check("heisenberg.eigenlines", "fundamental quadrics as character eigenlines",
              "10 eigenlines, 10 characters", eig)

    def wedge():
        signs = wedge_eigenbasis().signs
        even = all(sum(1 for s in v if s == -1) % 2 == 0 for v in signs.values())
        return f"even: {even}, distinct: {len(set(signs.values()))}"

    rec.check("heisenberg.wedge.signs", "sign vectors on the wedge eigenbasis",
              "even: True, distinct: 16", wedge)


def _suite_nieto(rec: _Recorder):
    from .exact.poly import MultiPoly
    from .heisenberg import wedge_eigenbasis
    from .nieto import (
        dline_points_mod_p,
        hyperplane_poly,
        jacobian_rank_on_N,
        m_equations,
        plane_families,
        quintic_poly,
        singular_census_N,
        squaring_fiber,
    )
    from .projgeom import plucker_relation

    fams = plane_families()

    def contained():
        allf = fams.s_planes + fams.v_planes + fams.d_lines
        inside = sum(f.contained_in_N() for f in allf)
        return f"{fams.counts()[:3]} contained: {_ratio(inside, len(allf))}"

    rec.check("nieto.families", "S-planes, V-planes, D-lines on N (symbolic)",
              "(15, 15, 20) contained: 50/50", contained)
    rec.check("nieto.nodes.orbit", "S6-orbit of (1:1:1:-1:-1:-1)", 10, lambda: len(fams.nodes))
    rec.check("nieto.nodes.jacobian", "Jacobian rank 1 at the nodes", "10/10",
              lambda: _ratio(sum(jacobian_rank_on_N(n) == 1 for n in fams.nodes), 10))

    def dlines():
        # rank 1 at every point of the line: grad F_N vanishes there identically
        grads = quintic_poly().gradient()
        ok = sum(all(g.substitute(f.param).is_zero() for g in grads) for f in fams.d_lines)
        return _ratio(ok, len(fams.d_lines))

    rec.check("nieto.dlines.jacobian", "grad F_N vanishes identically on every D-line",
              "20/20", dlines)

    for p in rec.cfg.census_primes():
        def census(p=p):
            c = singular_census_N(p, workers=rec.cfg.threads)
            dl = dline_points_mod_p(p)
            missing = len(dl - set(c.dline_points))
            obs = (f"{len(c.nodes)} nodes + {len(c.dline_points)} D-line points,"
                   f" {len(c.anomalies)} anomalies")
            if missing:
                return obs + f", {missing} D-line points missed", "fail"
            if c.anomalies:
                return obs + ": " + ", ".join(map(str, c.anomalies[:5])), "anomaly"
            return obs

        rec.check(f"nieto.census.p{p}", f"singular points of N(F_{p}) = nodes + D-line points",
                  f"10 nodes + {len(dline_points_mod_p(p))} D-line points, 0 anomalies", census)

    n = rec.cfg.count(10)

    def fibres():
        from .dictionary import n_points_mod_p

        rng = random.Random(f"fiber:{rec.cfg.seed}")
        pool = list(n_points_mod_p(13))
        rng.shuffle(pool)
        counts = []
        for u in pool:
            k = squaring_fiber(u)
            if k:  # admissible: some lam u is a square vector
                counts.append(k)
            if len(counts) == n:
                break
        return f"{_ratio(sum(c == 32 for c in counts), len(counts))} fibres of size 32"

    rec.check("nieto.squaring.fiber", "squaring fibres over admissible F_13 points of N",
              f"{n}/{n} fibres of size 32", fibres)

    def identity():
        x = MultiPoly.gens(6)
        sq = [v * v for v in x]
        h, q = m_equations()
        ok1 = h == hyperplane_poly().substitute(sq) and q == quintic_poly().substitute(sq)
        p = MultiPoly.gens(6)
        wb = wedge_eigenbasis()
        ys = [sum((p[i] * e for i, e in enumerate(row) if e), MultiPoly.zero(6)) for row in wb.basis]
        total = sum((y * y * c for y, c in zip(ys, wb.weights)), MultiPoly.zero(6))
        return f"M equations: {ok1}, Plücker = sum u: {total == plucker_relation(p)}"

    rec.check("nieto.squaring.identity", "u = x^2 identities (symbolic)",
              "M equations: True, Plücker = sum u: True", identity)


def _suite_quartics(rec: _Recorder):
    from .dictionary import _generic_fae
    from .exact.fields import GF
    from .quartics import DesmicParams, QuarticCoeffs, desmic_quartic, fae_poles_symbolic, lines_census
    from .quartics import singular_points

    rec.check("quartics.fae.poles", "poles singular on every F_AE member (symbolic)", True,
              fae_poles_symbolic)
    n = rec.cfg.count(20)
    for p in rec.cfg.census_primes():
        def fae(p=p):
            fld = GF(p)
            rng = random.Random(f"fae:{rec.cfg.seed}:{p}")
            counts = []
            while len(counts) < n:
                a = [fld.zero] + [fld(rng.randrange(p)) for _ in range(3)] + [fld.zero]
                if not _generic_fae(a):
                    continue
                counts.append(len(singular_points(QuarticCoeffs(a, fld).to_poly(), p)))
            other = sorted({k for k in counts if k != 4})
            return _ratio(counts.count(4), n) + (f" (other counts {other})" if other else "")

        rec.check(f"quartics.fae.p{p}", f"generic F_AE members over F_{p}: 4 singular points",
                  _ratio(n, n), fae)

    def lines32():
        _, f = desmic_quartic(DesmicParams(*rec.cfg.cd))
        found = {q: lines_census(f, q).count for q in (49, 121, 169)}
        text = ", ".join(f"q={q}: {c}" for q, c in found.items())
        hit = [q for q, c in found.items() if c == 32]
        return (f"32 at q={hit[0]}" if hit else "no such q") + f" ({text})", _verdict(bool(hit))

    c, d = rec.cfg.cd
    rec.check("quartics.desmic.lines32",
              f"desmic ({c}:{d}) has exactly 32 lines over some F_(p^2), p <= 13",
              "32 at some q", lines32)


def _suite_desmic(rec: _Recorder):
    from .exact.fields import GF
    from .projgeom import ProjPoint
    from .quartics import (
        POLES,
        DesmicParams,
        cube_vertices,
        desmic_lines_symbolic,
        desmic_quartic,
        reye_incidence,
        singular_points,
    )

    p = rec.cfg.prime
    params = DesmicParams(*rec.cfg.cd)
    _, f = desmic_quartic(params)

    rec.check("desmic.singular.count", f"singular points of the desmic member over F_{p}", 12,
              lambda: len(singular_points(f, p)))

    def where():
        fld = GF(p)
        want = {ProjPoint([fld(x) for x in v], fld) for v in POLES + cube_vertices()}
        return set(singular_points(f, p)) == want

    rec.check("desmic.singular.points", "the four poles and eight cube vertices", True, where)
    rec.check("desmic.lines.symbolic", "16 lines on every member (symbolic in C, D)", True,
              desmic_lines_symbolic)
    rec.check("desmic.reye", "one pole, one even, one odd vertex per line", "16/16",
              lambda: _ratio(sum(r.shape_ok for r in reye_incidence(params)), 16))


def _suite_jinv(rec: _Recorder):
    from .desmicj import (
        CrossRatio,
        desmic_j_pipeline,
        j_closed_form,
        j_from_lambda,
        j_identity_symbolic,
        s3_identities_symbolic,
    )
    from .quartics import DesmicParams

    n = rec.cfg.count(20)

    def pipeline():
        rng = random.Random(f"jinv:{rec.cfg.seed}")
        ok = done = 0
        while done < n:
            c, d = Fraction(rng.randint(-40, 40)), Fraction(rng.randint(-40, 40))
            if c * d * (c - d) == 0:
                continue
            done += 1
            params = DesmicParams(c, d)
            ok += desmic_j_pipeline(params).j == j_closed_form(params)
        return _ratio(ok, n)

    rec.check("jinv.pipeline", "pipeline j = closed-form j on random admissible (C:D)",
              _ratio(n, n), pipeline)
    rec.check("jinv.identity", "closed form = j(C/D) as rational functions", True,
              j_identity_symbolic)
    rec.check("jinv.harmonic", "j(-1)", 1728,
              lambda: j_from_lambda(CrossRatio(Fraction(-1), Fraction(1))))
    rec.check("jinv.s3", "j(lam) = j(1/lam) = j(1 - lam) (symbolic)",
              "{'inverse': True, 'complement': True}", s3_identities_symbolic)


def _suite_groups(rec: _Recorder):
    from .modgroups import (
        component_counts,
        embedding_checks,
        index_towers,
        lemma_trials,
        sp4_f2_class_sizes,
        sp4_f2_enumerate,
        symmetric_group_class_sizes,
        v3_checks,
    )

    rec.check("sp4f2.order", "|Sp(4, F_2)| by a 2^16 scan", 720, lambda: sp4_f2_enumerate().order)
    rec.check("sp4f2.classes", "class equation matches S6", True,
              lambda: sorted(sp4_f2_class_sizes()) == sorted(symmetric_group_class_sizes(6)))
    towers = index_towers()
    rec.check("towers.s1", "[S1 : S1(2)] in SL(2, Z/2)^2", 36, lambda: towers.s1_index)
    rec.check("towers.s2", "[S2 : S2''] * [S2'' : S2'] in SL(2, Z/4)^2", "6*8=48",
              lambda: "{}*{}={}".format(*towers.s2_tower, towers.s2_index))
    counts = component_counts()
    rec.check("counts.products", "720 / 36", 20, lambda: counts.products)
    rec.check("counts.bielliptic", "720 / 48", 15, lambda: counts.bielliptic)

    n = rec.cfg.count(100)
    rec.check("lemma.orbits", "orbit-count lemma on random instances", _ratio(n, n),
              lambda: _ratio(sum(t.lhs == t.rhs for t in lemma_trials(n, rec.cfg.seed)), n))

    m = rec.cfg.count(50)
    v3 = v3_checks(m, rec.cfg.seed)
    rec.check("v3.involution", "V3^2 = I", True, lambda: v3.square_is_identity)
    rec.check("v3.symplectic", "V3 symplectic", True, lambda: v3.symplectic)
    rec.check("v3.conjugates", "sampled Gamma_{1,3}(2) conjugates stay members", _ratio(m, m),
              lambda: _ratio(v3.conjugates_ok, v3.samples))

    k = rec.cfg.count(10)
    for which, locus in (("S1", "tau2 = 0"), ("S2", "3 tau1 = 2 tau2")):
        def emb(which=which):
            r = embedding_checks(which, pairs=50, points=k, seed=rec.cfg.seed)
            return (f"symplectic {_ratio(r.symplectic, r.samples)},"
                    f" hom {_ratio(r.homomorphism, r.samples)},"
                    f" stabilizes {_ratio(r.stabilizes, r.siegel_samples)}")

        rec.check(f"embed.{which.lower()}", f"{which} embedding: symplectic homomorphism fixing {locus}",
                  f"symplectic 50/50, hom 50/50, stabilizes {k}/{k}", emb)


def _witness_text(w) -> str:
    line, other, a, b = w
    def pl(x):
        return "(" + ":".join(map(str, x.plucker)) + ")"

    return (f"lines {pl(line)} and {pl(other)}"
            f" share x^2 but lie on {a} and {b}")


def _suite_dictionary(rec: _Recorder):
    from .dictionary import FitError, fit_dictionary, intertwining_check, validate_dictionary

    cfg = rec.cfg
    state = {}

    def fit():
        try:
            state["fit"] = fit_dictionary(primes=cfg.primes, seed=cfg.seed)
        except FitError as exc:
            state["error"] = exc
        return ""

    fit()  # shared by the next two records; its time is charged to the first

    def squaring():
        if "error" in state:
            return f"fit error: {state['error']}", "fail"
        reps = state["fit"].squaring
        bad = [r for r in reps if not r.feasible]
        if not bad:
            return "feasible"
        w = next((r.witness for r in bad if r.witness is not None), None)
        primes = ", ".join(str(r.p) for r in bad)
        return f"infeasible mod {primes}: " + ("no witness found" if w is None else _witness_text(w))

    rec.check("dictionary.fit.squaring", "L(x(line)^2) ~ a(line) solvable with the B-row anchor",
              "feasible", squaring)

    def incidence():
        if "error" in state:
            return f"fit error: {state['error']}", "fail"
        res = state["fit"]
        b = " ".join(str(x) for x in res.dictionary.matrix[1])
        return (f"{len(res.survivors)} of {res.candidates} anchored node matchings survive,"
                f" related by symmetry: {res.symmetric_survivors}; B = {b}")

    rec.check("dictionary.fit.incidence",
              "anchored node matching selected by line incidence (replacement route)",
              "4 of 4 anchored node matchings survive, related by symmetry: True;"
              " B = -1/2 -1/2 1/2 1/2 0 0", incidence)

    names = (("nodes", "nodes map to squares of fundamental quadrics"),
             ("vplane", "generic V-plane points map to 4-nodal quartics"),
             ("splane", "S-plane points map to quartics singular along a line"),
             ("dline", "L045 maps into the desmic pencil"),
             ("holdout", "holdout lines: F_N(L^-1 a(line)) = 0"),
             ("intertwining", "V-plane images = normalizer orbit of {A = E = 0}"))
    if "fit" not in state:
        for name, text in names:
            rec.skip(f"dictionary.{name}", text, "no fitted map")
        return

    d = state["fit"].dictionary
    val_primes = cfg.census_primes()[:2]
    rep = validate_dictionary(d, primes=val_primes, seed=cfg.seed, vplane=cfg.count(20))

    def group(prefix):
        cs = [c for c in rep.checks if c.name.startswith(prefix + ".")]
        return "; ".join(c.detail for c in cs), _verdict(bool(cs) and all(c.ok for c in cs))

    expected = {
        "nodes": "10 nodes to 10 distinct squares",
        "vplane": "all samples 4-nodal",
        "splane": "all samples singular along a line",
        "dline": "onto the desmic pencil",
        "holdout": "all residuals zero",
    }
    for name, text in names[:5]:
        rec.check(f"dictionary.{name}", text, expected[name], lambda name=name: group(name))

    def intertwine():
        images, orbit = intertwining_check(d)
        return f"{len(images)} images, orbit {len(orbit)}, equal: {images == orbit}"

    rec.check("dictionary.intertwining", names[5][1], "15 images, orbit 15, equal: True", intertwine)


_RUNNERS = {
    "heisenberg": _suite_heisenberg,
    "nieto": _suite_nieto,
    "quartics": _suite_quartics,
    "desmic": _suite_desmic,
    "jinv": _suite_jinv,
    "groups": _suite_groups,
    "dictionary": _suite_dictionary,
}

# acceptance criterion -> (record id prefixes, runtime limit in seconds)
CRITERIA = {
    1: (("heisenberg.",), 5),
    2: (("nieto.families", "nieto.nodes", "nieto.dlines", "nieto.census"), 60),
    3: (("quartics.", "desmic."), 90),
    4: (("jinv.",), 5),
    5: (("sp4f2.", "towers.", "counts.", "lemma.", "v3.", "embed."), 30),
    6: (("nieto.squaring",), 10),
    7: (("dictionary.fit.squaring", "dictionary.fit.incidence", "dictionary.nodes",
         "dictionary.vplane", "dictionary.splane", "dictionary.dline", "dictionary.holdout"), 60),
}


def run_suite(name: str, config: Config | None = None, parallel: bool = False) -> list:
    cfg = config or Config()
    for p in tuple(cfg.primes) + (cfg.prime,):
        check_prime(p)
    if name == "all":
        return run_all(cfg, parallel)
    runner = _RUNNERS.get(name)
    if runner is None:
        raise UnknownSuite(f"unknown suite {name!r}")
    rec = _Recorder(cfg)
    runner(rec)
    return rec.records


def run_all(cfg: Config, parallel: bool = False) -> list:
    """Every suite in a fixed order, then one roll-up record per acceptance criterion."""
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(len(SUITES)) as pool:
            results = list(pool.map(lambda s: run_suite(s, cfg), SUITES))
    else:
        results = [run_suite(s, cfg) for s in SUITES]
    records = [r for rs in results for r in rs]
    return records + criterion_records(records)


def criterion_records(records: list) -> list:
    out = []
    for k, (prefixes, limit) in CRITERIA.items():
        mine = [r for r in records if r.id.startswith(prefixes)]
        failing = [r.id for r in mine if r.status in ("fail", "skipped")]
        observed = f"{len(mine) - len(failing)}/{len(mine)} checks pass"
        if failing:
            observed += "; failing: " + ", ".join(failing)
        out.append(CheckRecord(
            f"criterion.{k}", f"acceptance criterion {k} (runtime limit {limit} s)",
            _verdict(bool(mine) and not failing),
            f"{len(mine)}/{len(mine)} checks pass", observed, sum(r.millis for r in mine),
        ))
    return out


# ---------------------------------------------------------------------------
# output


def _entry(r: CheckRecord, timings: bool) -> list:
    ms = f"  [{r.millis} ms]" if timings else ""
    out = [f"{r.status.upper():8} {r.id}: {r.description}{ms}"]
    if r.status != "pass":
        out.append(f"         expected {r.expected}")
        out.append(f"         observed {r.observed}")
    return out


def render_text(records, suite: str, cfg: Config) -> str:
    primes = ",".join(map(str, cfg.primes))
    lines = [f"suite {suite}  primes {primes}  prime {cfg.prime}  seed {cfg.seed}"]
    for r in records:
        if r.status != "fail":
            lines += _entry(r, cfg.timings)
    anomalies = [r for r in records if r.status == "anomaly"]
    if anomalies:
        lines.append("anomalies (reported, not failing):")
        lines += [f"  {r.id}: {r.observed}" for r in anomalies]
    counts = ", ".join(f"{sum(r.status == s for r in records)} {s}" for s in STATUSES)
    lines.append(counts)
    failing = [r for r in records if r.status == "fail"]
    for r in failing:
        lines += _entry(r, cfg.timings)
    if failing:
        lines.append("failed: " + ", ".join(r.id for r in failing))
    return "\n".join(lines) + "\n"


def render_json(records, suite: str, cfg: Config) -> str:
    doc = {"suite": suite, "config": cfg.to_json(), "checks": [asdict(r) for r in records]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def emit_report(records, format: str = "text", path=None, suite: str = "",
                config: Config | None = None, stream=None) -> int:
    """Write the report to ``path`` (or the stream); exit code 0 iff nothing failed."""
    cfg = config or Config()
    if format == "text":
        body = render_text(records, suite, cfg)
    elif format == "json":
        body = render_json(records, suite, cfg)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is None:
        (stream or sys.stdout).write(body)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(body)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return 1 if any(r.status == "fail" for r in records) else 0


def select(records, check_id: str | None) -> list:
    if check_id is None:
        return records
    out = [r for r in records if r.id == check_id]
    if not out:
        raise KeyError(f"no check with id {check_id!r}")
    return out
