"""Scenario registry and deterministic run orchestration."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import bindu, goriparthi, holbl, wang
from .netsim import Clock, Transcript, Verdict
from .numtheory import MAX_BITS, MIN_BITS, gen_params

DEFAULT_BITS = 32
ORACLE_BITS = 16


class UsageError(ValueError):
    """Bad scenario name or configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    section: str
    # "honest": expect honest-success; "attack": expect attack-success;
    # "consistency": expect verdict/oracle agreement, any outcome
    expects: str
    runner: Callable
    needs_params: bool = True
    oracle: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    seed: int = 0
    bits: Optional[int] = None
    trials: int = 1
    delta_t: int = 2
    hash_bits: int = 256
    output: str = "text"


@dataclass
class RunReport:
    scenario: str
    trials: int
    counts: dict
    rates: dict
    mismatches: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0

    def to_dict(self) -> dict:
        # elapsed is wall-clock and would break byte-identical output
        return {"report": {"scenario": self.scenario, "trials": self.trials,
                           "counts": self.counts, "rates": self.rates,
                           "mismatches": self.mismatches, "passed": self.passed}}


def _with_params(fn):
    return lambda t, ctx: fn(t, ctx.params, ctx.rng, ctx.clock, width=ctx.width)


@dataclass
class TrialContext:
    rng: random.Random
    clock: Clock
    width: int
    params: object = None


SCENARIOS = {s.name: s for s in [
    Scenario("bindu-honest", "Bindu et al.: registration, login, mutual authentication",
             "II.A", "honest", _with_params(bindu.run_honest)),
    Scenario("bindu-insider", "Bindu et al.: insider impersonation with a lost smart card",
             "II.B", "attack", _with_params(bindu.run_insider)),
    Scenario("goriparthi-honest", "Goriparthi et al.: honest password change",
             "III.A", "honest", lambda t, ctx: goriparthi.run_honest(t, ctx.rng),
             needs_params=False),
    Scenario("goriparthi-dos", "Goriparthi et al.: DoS through the password change phase",
             "III.B", "attack", lambda t, ctx: goriparthi.run_dos(t, ctx.rng),
             needs_params=False),
    Scenario("wang-honest", "Wang et al.: honest password change",
             "IV.A", "honest", lambda t, ctx: wang.run_honest(t, ctx.rng, ctx.width),
             needs_params=False),
    Scenario("wang-dos", "Wang et al.: DoS through the password change phase",
             "IV.B", "attack", lambda t, ctx: wang.run_dos(t, ctx.rng, ctx.width),
             needs_params=False),
    Scenario("holbl1-honest", "Hölbl et al. protocol 1: key agreement",
             "V.A", "honest",
             lambda t, ctx: holbl.run_honest(t, ctx.params, ctx.rng, ctx.clock, 1, ctx.width)),
    Scenario("holbl2-honest", "Hölbl et al. protocol 2: key agreement",
             "V.C", "honest",
             lambda t, ctx: holbl.run_honest(t, ctx.params, ctx.rng, ctx.clock, 2, ctx.width)),
    Scenario("holbl1-recover", "Hölbl et al. protocol 1: insider recovery of the KGC secret",
             "V.B", "consistency",
             lambda t, ctx: holbl.run_recover(t, ctx.params, ctx.rng, ctx.clock, 1, ctx.width),
             oracle=True),
    Scenario("holbl2-recover", "Hölbl et al. protocol 2: insider recovery of the KGC secret",
             "V.D", "consistency",
             lambda t, ctx: holbl.run_recover(t, ctx.params, ctx.rng, ctx.clock, 2, ctx.width),
             oracle=True),
    Scenario("holbl1-impersonate", "Hölbl et al. protocol 1: derive another user's key and "
             "impersonate them", "V.B", "consistency",
             lambda t, ctx: holbl.run_impersonate(t, ctx.params, ctx.rng, ctx.clock, ctx.width)),
]}


def list_scenarios() -> list[dict]:
    return [{"name": s.name, "description": s.description, "section": s.section}
            for s in SCENARIOS.values()]


def trial_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:trial:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def resolve_config(config: ScenarioConfig) -> tuple[Scenario, int]:
    """Validate ``config``; return the scenario and the effective prime size."""
    scenario = SCENARIOS.get(config.scenario)
    if scenario is None:
        raise UsageError(f"unknown scenario {config.scenario!r}")
    bits = config.bits
    if bits is None:
        bits = ORACLE_BITS if scenario.oracle else DEFAULT_BITS
    if not MIN_BITS <= bits <= MAX_BITS:
        raise UsageError(f"bits must be in [{MIN_BITS}, {MAX_BITS}]")
    if scenario.oracle and bits > ORACLE_BITS:
        raise UsageError(f"{scenario.name} uses a brute-force oracle; bits must be <= {ORACLE_BITS}")
    if config.trials < 1:
        raise UsageError("trials must be >= 1")
    if config.delta_t < 1:
        raise UsageError("delta-t must be >= 1")
    if config.hash_bits < 8 or (scenario.needs_params and config.hash_bits < bits):
        raise UsageError("hash-bits must be >= 8 and >= bits")
    if config.output not in ("text", "json"):
        raise UsageError("output must be text or json")
    return scenario, bits


def run_trial(scenario: Scenario, config: ScenarioConfig, bits: int, index: int):
    """One independent seeded run; returns (transcript, metrics, matched)."""
    seed = trial_seed(config.seed, index)
    transcript = Transcript(scenario.name, seed)
    ctx = TrialContext(random.Random(seed), Clock(0, config.delta_t), config.hash_bits)
    if scenario.needs_params:
        ctx.params = gen_params(bits, seed)
    metrics = scenario.runner(transcript, ctx)
    if scenario.expects == "honest":
        matched = transcript.verdict == Verdict.HONEST_SUCCESS
    elif scenario.expects == "attack":
        matched = transcript.verdict == Verdict.ATTACK_SUCCESS
    else:
        matched = bool(metrics.get("consistent"))
    return transcript, metrics, matched


def _aggregate(all_metrics: list[dict]) -> dict:
    keys = sorted({k for m in all_metrics for k in m})
    rates = {}
    for key in keys:
        values = [m[key] for m in all_metrics if key in m]
        if all(isinstance(v, bool) for v in values):
            rates[key] = round(sum(values) / len(values), 6)
        elif all(isinstance(v, int) for v in values):
            rates[key + "_total"] = sum(values)
    return rates


def run_scenario(config: ScenarioConfig):
    """Execute ``config.trials`` runs; return (trial-0 transcript, RunReport)."""
    scenario, bits = resolve_config(config)
    started = time.perf_counter()
    counts = {v.value: 0 for v in Verdict}
    metrics, mismatches, first = [], 0, None
    for index in range(config.trials):
        transcript, m, matched = run_trial(scenario, config, bits, index)
        if first is None:
            first = transcript
        counts[transcript.verdict.value] += 1
        metrics.append(m)
        mismatches += not matched
    report = RunReport(scenario.name, config.trials, counts, _aggregate(metrics),
                       mismatches, time.perf_counter() - started)
    return first, report


def render(transcript: Transcript, report: RunReport, output: str) -> str:
    if output == "json":
        return transcript.to_jsonl() + json.dumps(report.to_dict(), sort_keys=True) + "\n"
    lines = [f"scenario: {report.scenario}  trials: {report.trials}  "
             f"elapsed: {report.elapsed:.2f}s"]
    lines += [f"  {name:24s} {n}" for name, n in report.counts.items() if n]
    lines += [f"  {name:24s} {value}" for name, value in report.rates.items()]
    lines.append(f"  expectation mismatches    {report.mismatches}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"
