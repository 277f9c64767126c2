"""Cesaro rate-bound sweep for the closed-form families.

Writes one directory per family under out/: the sandwich CSV per certified
angle plus report.json.  The bernstein_szego cesaro column should read
(1 + (n-1)/3)/n at angle 0, heading toward 1/3.
"""

import sys

from opuclab import config_from_dict, run_experiment, write_outputs

RUNS = {
    "mnt_lebesgue": {"name": "lebesgue"},
    "mnt_bs_half": {"name": "bernstein_szego", "r": 0.5},
    "mnt_mixed": {
        "name": "mixed",
        "base": {"name": "bernstein_szego", "r": 0.3},
        "atoms": [{"angle": 2.0, "mass": 0.2}],
    },
}


def main() -> int:
    failed = 0
    for label, family in RUNS.items():
        config = config_from_dict({
            "family": family,
            "grid_size": 4096,
            "n_list": [4, 16, 64, 256],
            "experiment": "mnt",
            "output_path": f"out/{label}",
            "seed": 1,
        })
        outcome = run_experiment(config)
        write_outputs(outcome, config.output_path)
        counts = outcome.report["summary"]
        print(
            f"{label}: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['skip']} skip -> {config.output_path}"
        )
        failed += counts["fail"]
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
