from harness.instance import (
    DegenerateScenarioError,
    InstanceSummary,
    SchemeOutcome,
    build_instance,
    evaluate_schemes,
    evaluate_seed,
)
from harness.runner import HarnessError, mean_and_ci95, run_point, stable_hash
from harness.sweep import run_sweep, sweep_to_csv
from harness.single import run_oracle, run_single
