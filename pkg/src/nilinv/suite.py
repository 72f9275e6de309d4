"""The end-to-end checks behind ``nilinv verify``.

Each check returns a :class:`CheckResult` with a one-line summary and detail
lines.  ``scale`` multiplies the fuzz trial counts (1.0 = full size).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact import J2, NilTuple
from .fuzz import ALL_FAMILIES, fuzz_canon, fuzz_theorem
from .pinning import replay_pinning_triples
from .span import DEFAULT_SEED, generation_sanity, indecomposability_report, minimal_generation_report
from .witnesses import S32_PAIRS, verify_minimality
from .words import all_words_agree


@dataclass
class CheckResult:
    name: str
    passed: bool
    summary: str
    details: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.summary}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "summary": self.summary, "details": self.details}


def _n(base: int, scale: float) -> int:
    return max(1, int(base * scale))


def check_witnesses() -> CheckResult:
    reps = [verify_minimality("S33"), verify_minimality("S32"),
            verify_minimality("S2", 2), verify_minimality("S2", 3)]
    s2_ok = sum(r.passed for r in reps[2:])
    summary = f"{reps[0].summary()}, {reps[1].summary()}, {s2_ok}/2 S2"
    details = [f"{r.set_name} d={r.d} against {r.against}: {len(r.witnessed)}/{r.total}"
               + (f" missing {[str(w) for w in r.missing]}" if r.missing else "") for r in reps]
    return CheckResult("witnesses", all(r.passed for r in reps), summary, details)


def check_indecomposable(seed: int = DEFAULT_SEED) -> CheckResult:
    items = indecomposability_report(seed)
    steps = replay_pinning_triples()
    details = []
    for it in items:
        v = it.verdicts[0]
        details.append(f"{it.name} mdeg={it.mdeg}: rank {v.rank_candidates} -> {v.rank_total}"
                       f" (+{v.n_targets} needed), seeds {[x.seed for x in it.verdicts]}: "
                       + ("independent" if it.passed else "DEPENDENT"))
    for s in steps:
        status = "as printed" if s.printed_ok else ("with corrected triples" if s.corrected_ok else "NOT reproduced")
        extra = f", LHS-RHS = {s.residual}" if s.residual is not None else ""
        details.append(f"replay ({s.item}) {s.label}: {s.stated} reproduced {status}{extra}")
        if not s.printed_ok and s.note:
            details.append(f"  erratum ({s.item}) {s.label}: {s.note}")
    ok = all(it.passed and it.consistent for it in items) and all(s.ok for s in steps)
    contradictions = [s for s in steps if s.stated == "0 = -1"]
    ok = ok and len(contradictions) == 2 and all(s.residual == -1 for s in contradictions)
    errata = sum(not s.printed_ok for s in steps)
    summary = (f"{sum(it.passed for it in items)}/{len(items)} rank conditions over {len(items[0].verdicts)} seeds, "
               f"{sum(s.ok for s in steps)}/{len(steps)} replay steps ({errata} via corrected triples)")
    return CheckResult("indecomposable", ok, summary, details)


def check_min_generation(seed: int = DEFAULT_SEED) -> CheckResult:
    rows = minimal_generation_report(seed)
    outside = [w for w, dec in rows if not dec.member]
    details = [f"{w}: {'not in span' if not dec.member else 'IN SPAN'} ({dec.samples_used} samples)" for w, dec in rows]
    return CheckResult("min-generation", len(outside) == len(rows),
                       f"{len(outside)}/{len(rows)} P' elements outside the decomposable span", details)


def check_degree_bound() -> CheckResult:
    a2, b2 = S32_PAIRS["112212"]
    a, b = NilTuple.of(J2, a2), NilTuple.of(J2, b2)
    w5 = all_words_agree(a, b, 5)
    w6 = all_words_agree(a, b, 6)
    ok = w5 is None and w6 is not None
    summary = f"max_len=5: {'agree' if w5 is None else f'differ at {w5}'}; max_len=6: " + (
        f"differ at {w6}" if w6 is not None else "agree")
    return CheckResult("degree-bound", ok, summary)


def check_canon(seed: int = DEFAULT_SEED, scale: float = 1.0) -> CheckResult:
    n = _n(10_000, scale)
    reps = [fuzz_canon(n, seed, s) for s in ("J1", "J2")]
    details = [f"{r.stabilizer}: {r.trials} trials, tags {dict((k, r.tags[k]) for k in r.expected_tags)}, "
               f"failures {dict(r.failures)}" for r in reps]
    ok = all(r.ok for r in reps)
    return CheckResult("canon", ok, f"{n} trials per stabilizer, "
                       f"{sum(sum(r.failures.values()) for r in reps)} failures, "
                       f"missing tags {sum((r.missing_tags for r in reps), [])}", details)


THEOREM_TRIALS = {"Conjugate": 10_000, "StrictUpper": 1_000, "Template": 1_000, "Independent": 1_000}


def check_theorem(seed: int = DEFAULT_SEED, scale: float = 1.0) -> CheckResult:
    report = None
    for fam in ALL_FAMILIES:
        r = fuzz_theorem(_n(THEOREM_TRIALS[fam.tag], scale), seed, fam)
        report = r if report is None else report.merge(r)
    fams = report.families
    details = [f"{k}: {v.checked} checked, {v.s33_agreeing} S33-agreeing, {v.violations} violations"
               for k, v in sorted(fams.items())]
    drift = [k for k, v in fams.items() if k.startswith("Template:") and v.s33_agreeing != v.checked]
    ind = fams["Independent"]
    separated = 1 - ind.s33_agreeing / ind.checked
    ok = report.violations == 0 and not drift and separated > 0.9
    summary = (f"{report.checked} pairs, {report.violations} violations, "
               f"templates drifting {drift}, independent separated {separated:.1%}")
    return CheckResult("theorem", ok, summary, details)


def check_generation(seed: int = DEFAULT_SEED) -> CheckResult:
    rows = generation_sanity(4, seed)
    ok = all(dec.member and dec.validated > 0 for _, _, dec in rows)
    details = []
    for w, cands, dec in rows:
        terms = " + ".join(f"{c}*{p}" for c, p in zip(dec.coefficients or (), cands) if c) or "0"
        details.append(f"tr({w}) = {terms}  [validated on {dec.validated} fresh samples]"
                       if dec.member else f"tr({w}) NOT in span")
    return CheckResult("generation", ok, f"{sum(d.member for _, _, d in rows)}/{len(rows)} words outside P33 "
                       "expressed by products and generators", details)


def run_all(seed: int = DEFAULT_SEED, scale: float = 1.0) -> list[CheckResult]:
    return [
        check_witnesses(),
        check_indecomposable(seed),
        check_min_generation(seed),
        check_degree_bound(),
        check_canon(seed, scale),
        check_theorem(seed, scale),
        check_generation(seed),
    ]
