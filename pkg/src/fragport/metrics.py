"""Run metrics over application method fragments (AMFs).

Partition semantics:
  - SNEF covers AMFs never exercised by source tests; GS/GF/GE partition the
    covered rest (a covered fragment the isolation harness never executed,
    including harness-absent and non-parseable cases, counts as GE), so
    SNEF + GS + GF + GE = 100% of AMFs exactly.
  - Over the covered share: TNEF (never exercised by translated tests), ATP
    (all applicable pass), OTF (exactly one fails, others pass), MTF (two or
    more fail, not all), ATF (all fail). Disjoint by construction, so
    TNEF + ATP + OTF + MTF + ATF equals the covered share exactly.
  - RE/AF split the failing occurrences of each bucket by failure kind.
  - TPR is pass / (pass + fail + error) over executed translated test
    fragments (skipped ones are excluded).
  - M1 counts GE fragments that translated tests did exercise: All = every
    applicable test passed, Some = at least one passed.

All ratios are exact fractions until presentation; percentages render with
two decimals, half-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction


@dataclass
class FragmentOutcome:
    """Metrics-relevant view of one AMF."""
    fragment_id: str
    covered: bool                          # exercised by source tests
    syntax: str                            # parseable | non-parseable
    graal: str                             # graal-success | graal-fail | graal-error | not-run
    applicable: list[tuple[str, str | None]] = field(default_factory=list)
    # (status, failure_kind) of executed translated test fragments covering it


@dataclass
class MetricsTable:
    amf: int
    syntax_check: Fraction
    snef: Fraction
    gs: Fraction
    gf: Fraction
    ge: Fraction
    tnef: Fraction
    atp: Fraction
    otf: Fraction
    otf_re: Fraction
    otf_af: Fraction
    mtf: Fraction
    mtf_re: Fraction
    mtf_af: Fraction
    atf: Fraction
    atf_re: Fraction
    atf_af: Fraction
    tpr: Fraction
    m1_all: int
    m1_some: int

    def as_percent_dict(self) -> dict:
        def pct(x: Fraction) -> float:
            return float(percent(x))

        return {
            "AMF": self.amf,
            "SyntaxCheck%": pct(self.syntax_check), "SNEF%": pct(self.snef),
            "GS%": pct(self.gs), "GF%": pct(self.gf), "GE%": pct(self.ge),
            "TNEF%": pct(self.tnef), "ATP%": pct(self.atp),
            "OTF%": pct(self.otf), "OTF_RE%": pct(self.otf_re), "OTF_AF%": pct(self.otf_af),
            "MTF%": pct(self.mtf), "MTF_RE%": pct(self.mtf_re), "MTF_AF%": pct(self.mtf_af),
            "ATF%": pct(self.atf), "ATF_RE%": pct(self.atf_re), "ATF_AF%": pct(self.atf_af),
            "TPR%": pct(self.tpr), "M1-All": self.m1_all, "M1-Some": self.m1_some,
        }


def percent(x: Fraction) -> Decimal:
    """Two-decimal half-up rendering of a unit fraction as a percentage."""
    return (Decimal(x.numerator) * 100 / Decimal(x.denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP)


def _ratio(n: int, d: int) -> Fraction:
    return Fraction(n, d) if d else Fraction(0)


def bucket_of(outcome: FragmentOutcome) -> str:
    """covered-AMF bucket: tnef | atp | otf | mtf | atf"""
    executed = [(s, k) for s, k in outcome.applicable if s != "skipped"]
    if not executed:
        return "tnef"
    failing = [(s, k) for s, k in executed if s in ("fail", "error")]
    if not failing:
        return "atp"
    if len(failing) == len(executed):
        return "atf"
    if len(failing) == 1:
        return "otf"
    return "mtf"


def compute_metrics(outcomes: list[FragmentOutcome],
                    chain_counts: tuple[int, int, int] | None = None) -> MetricsTable:
    """chain_counts: (passed, failed, errored) executed translated test
    fragments for TPR; derived from the outcomes' applicable sets when None
    (which double-counts shared tests, so callers with real runs pass it)."""
    amf = len(outcomes)
    parseable = sum(1 for o in outcomes if o.syntax == "parseable")
    uncovered = [o for o in outcomes if not o.covered]
    covered = [o for o in outcomes if o.covered]
    gs = sum(1 for o in covered if o.graal == "graal-success")
    gf = sum(1 for o in covered if o.graal == "graal-fail")
    ge = len(covered) - gs - gf  # graal-error plus never-executed covered

    buckets: dict[str, list[FragmentOutcome]] = {
        "tnef": [], "atp": [], "otf": [], "mtf": [], "atf": []}
    for o in covered:
        buckets[bucket_of(o)].append(o)

    def re_af(members: list[FragmentOutcome]) -> tuple[Fraction, Fraction]:
        kinds = [k for o in members for s, k in o.applicable
                 if s in ("fail", "error")]
        if not kinds:
            return Fraction(0), Fraction(0)
        re = sum(1 for k in kinds if k == "runtime_error")
        return _ratio(re, len(kinds)), _ratio(len(kinds) - re, len(kinds))

    otf_re, otf_af = re_af(buckets["otf"])
    mtf_re, mtf_af = re_af(buckets["mtf"])
    atf_re, atf_af = re_af(buckets["atf"])

    if chain_counts is None:
        statuses = [s for o in outcomes for s, _ in o.applicable if s != "skipped"]
        passed = sum(1 for s in statuses if s == "pass")
        total = len(statuses)
    else:
        passed, failed, errored = chain_counts
        total = passed + failed + errored

    m1 = [o for o in covered if o.graal not in ("graal-success", "graal-fail")
          and any(s != "skipped" for s, _ in o.applicable)]
    m1_all = sum(1 for o in m1 if bucket_of(o) == "atp")
    m1_some = sum(1 for o in m1
                  if any(s == "pass" for s, _ in o.applicable) and bucket_of(o) != "atp")

    return MetricsTable(
        amf=amf,
        syntax_check=_ratio(parseable, amf),
        snef=_ratio(len(uncovered), amf),
        gs=_ratio(gs, amf), gf=_ratio(gf, amf), ge=_ratio(ge, amf),
        tnef=_ratio(len(buckets["tnef"]), amf),
        atp=_ratio(len(buckets["atp"]), amf),
        otf=_ratio(len(buckets["otf"]), amf), otf_re=otf_re, otf_af=otf_af,
        mtf=_ratio(len(buckets["mtf"]), amf), mtf_re=mtf_re, mtf_af=mtf_af,
        atf=_ratio(len(buckets["atf"]), amf), atf_re=atf_re, atf_af=atf_af,
        tpr=_ratio(passed, total),
        m1_all=m1_all, m1_some=m1_some,
    )


def outcomes_from_run(schema, tvos: dict, latest_chain_events: dict) -> \
        tuple[list[FragmentOutcome], tuple[int, int, int]]:
    """Builds metrics inputs from a schema, final TVOs and the latest chain
    run per chain (journal 'chain' events)."""
    applicable: dict[str, list[tuple[str, str | None]]] = {}
    passed = failed = errored = 0
    for event in latest_chain_events.values():
        exercised = event.get("exercised", {})
        for record in event["results"]:
            status = record["status"]
            if status == "pass":
                passed += 1
            elif status == "fail":
                failed += 1
            elif status == "error":
                errored += 1
            for fid in exercised.get(record["test_id"], []):
                applicable.setdefault(fid, []).append((status, record.get("kind")))
    outcomes = []
    for frag in schema.fragments_of_kind("application_method"):
        tvo = tvos.get(frag.id)
        outcomes.append(FragmentOutcome(
            fragment_id=frag.id,
            covered=schema.coverage.get(frag.id, 0) > 0,
            syntax=(tvo.syntax_outcome if tvo and tvo.syntax_outcome else "non-parseable"),
            graal=(tvo.graal_outcome if tvo else "not-run"),
            applicable=applicable.get(frag.id, []),
        ))
    return outcomes, (passed, failed, errored)
