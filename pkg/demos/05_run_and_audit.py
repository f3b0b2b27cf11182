"""A ten-event run of the reference scenario, written out and audited."""

import json

from dalmas.engine import Trace, audit, run
from dalmas.scenario import reference_scenario

sc = reference_scenario()
d, start = sc.build()
trace = run(d, start, sc.engine.k)

for ev in trace.events:
    print(ev.t, ev.mover, ev.chosen, "blocked:", list(ev.verdict.prohibited), "choice:", ev.choice)

final = trace.phi(trace.k).state
print("collected", final.total_collected(), "left", final.total_waste(), "deadlocks", trace.deadlocks())

text = trace.dumps(d.world)
print(audit(Trace.loads(text, d.world), d).summary())

# tamper with one decision
records = [json.loads(line) for line in text.splitlines()]
records[4]["chosen"] = "east" if records[4]["chosen"] != "east" else "west"
report = audit(Trace.from_records(records, d.world), d)
print(report.summary())
print(report.first)
