#!/usr/bin/env python3
"""Evaluate the four regime fixtures and print the classification table."""

from cpdq_lab import natural_units, regime_classify
from cpdq_lab.acceptance import REGIME_EXPECTED, regime_fixture_metrics


def main():
    consts = natural_units()
    print(f"{'fixture':22s} {'mean|dI|':>12s} {'max dI_q':>10s} "
          f"{'max dI_p':>10s}  label")
    for name in REGIME_EXPECTED:
        mean, dq, dp = regime_fixture_metrics(name, consts)
        report = regime_classify(mean, dq, dp)
        print(f"{name:22s} {mean:12.3e} {dq:10.3e} {dp:10.3e}  "
              f"{report.label.value}")


if __name__ == "__main__":
    main()
