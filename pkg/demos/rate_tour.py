"""A tour of the two rate evaluators on a small binary network.

Run as a script.  Builds a network whose direct link is noisier than the
links into the relays, looks at why naive input laws fail the existence
conditions, then lets the searches find laws that do not.
"""

import tempfile
from pathlib import Path

from tworelay import (
    SearchConfig,
    channel_preset,
    eval_theorem1,
    load_law,
    optimize_t1,
    optimize_t2,
)
from tworelay import io as tio
from tworelay.info import binary_entropy
from tworelay.prob import uniform_t1_law

# The sender's bit reaches the receiver through a 25% flip while each relay
# hears a much cleaner 5% copy.  The relays' own transmissions never reach
# the receiver on this preset, so anything they know is only useful if the
# sender folds it into its own signal, which it can, since it sees the
# relay transmissions before choosing its symbol.
channel = channel_preset(
    "binary-symmetric-links",
    crossover={"Y0": 0.25, "Y1": 0.05, "Y2": 0.05},
)
direct = 1.0 - binary_entropy(0.25)
print(f"direct link alone supports {direct:.5f} bits per use")

# The uniform law is instructive: its quantizers are conditionally uniform,
# so compression costs nothing, but it also buys nothing, and the sender's
# symbol ignores the relay inputs, so the decoding budget is exactly zero.
# The existence conditions are strict and zero slack is not enough.
law = uniform_t1_law(channel)
report = eval_theorem1(channel, law)
print()
print(f"uniform law: feasible={report.feasible} "
      f"(objective would be {report.objective_bits:.4f} bits)")
for check in report.constraints:
    mark = "ok" if check.satisfied else "violated"
    print(f"  {check.label:5s} {check.lhs:8.5f} {check.sense} {check.rhs:8.5f}  {mark}")

# The grid search fixes that on its own.  Watch the budget side of the
# constraints: it tilts the sender's cooperation component slightly so the
# relay symbols leave a faint imprint on the received signal, which buys a
# strictly positive decoding budget for a still-free quantizer.
print()
print("grid search over compression laws")
result = optimize_t1(channel, SearchConfig(mode="grid", resolution=16))
print(f"  best objective: {result.best_objective_bits:.5f} bits "
      f"after {result.evaluations} evaluations")
for check in result.best_report.constraints:
    print(f"  {check.label:5s} {check.lhs:8.5f} {check.sense} {check.rhs:8.5f}")

# The second scheme adds a decode-and-forward layer.  Started from random
# laws it fails honestly: a random quantizer always costs more than its
# decoding budget, so every restart is infeasible and the result says so.
print()
print("random-restart search with the forwarding layer")
result2 = optimize_t2(
    channel, SearchConfig(mode="random-restart", restarts=6, max_iter=16, seed=7)
)
if result2.infeasible_everywhere:
    print("  no feasible law found from random starts (expected here)")

# Seeded from the uniform law instead, the grid walks to the direct-link
# capacity exactly; the second scheme's closure semantics admit the
# boundary law that the first scheme's strict conditions exclude.
result3 = optimize_t2(channel, SearchConfig(mode="grid", resolution=8))
print(f"  grid from uniform: {result3.best_objective_bits:.5f} bits "
      f"(direct-link capacity {direct:.5f})")

# Everything serializes.  The winning law survives a round trip through its
# JSON file format with the objective reproduced exactly.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "best_law.json"
    path.write_text(tio.dumps(tio.law_to_dict(result.best_law)))
    again = eval_theorem1(channel, load_law(str(path)))
    print()
    print(f"reloaded law re-evaluates to {again.objective_bits:.6f} bits "
          f"(match: {again.objective_bits == result.best_objective_bits})")
