#!/usr/bin/env python3
# Error rate vs noise power for plain ScalableMax and three EC variants.
# A scaled-down cut of the full experiment grid; the CLI equivalent is
#   scalablemax sweep --agents 1000 --noise-db-range=-4:14:3 ... --out sweep.csv

from scalablemax import ExperimentConfig, run_experiment

RUNS = 1000
DBS = [-4.0, -1.0, 2.0, 5.0, 8.0, 11.0, 14.0]

series = [("no EC", "scalablemax", None)] + [
    (f"tau={t}", "scalablemax-ec", t) for t in (2, 5, 10)
]

rows = {}
for label, scheme, tau in series:
    for db in DBS:
        config = ExperimentConfig(
            agents=1000, m=8, scheme=scheme, tau=tau,
            noise_db=db, runs=RUNS, base_seed=3,
        )
        record = run_experiment(config)
        rows[(label, db)] = (
            1.0 - record.success_rate,
            record.average_iterations_in_successful_runs,
        )

header = "noise dB " + "".join(f"{label:>12}" for label, _, _ in series)
print("error rate (fraction of failed runs):")
print(header)
for db in DBS:
    cells = "".join(f"{rows[(label, db)][0]:12.3f}" for label, _, _ in series)
    print(f"{db:8.1f} {cells}")

print("\nmean iterations in successful runs:")
print(header)
for db in DBS:
    cells = "".join(f"{rows[(label, db)][1]:12.1f}" for label, _, _ in series)
    print(f"{db:8.1f} {cells}")

print(f"\n({RUNS} runs per point; larger tau buys accuracy with iterations)")
