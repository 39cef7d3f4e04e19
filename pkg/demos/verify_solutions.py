"""Audit the encoded Laplace-domain solutions with and without the corrections."""

from ewldyn import ReservoirParams
from ewldyn.audit import corrections_report, corpus_audit, run_audits
from ewldyn.solutions import ALL_CORRECTIONS, PRINTED

params = ReservoirParams.strong_coupling()

for label, corrections in (("corrected", ALL_CORRECTIONS), ("as printed", PRINTED)):
    print(f"== {label}")
    for line in corrections_report(corrections):
        print(" ", line)
    for res in run_audits(params, corrections, dual=False):
        print(" ", res.line())

print("== standard transform pairs")
for res in corpus_audit():
    print(" ", res.line())
