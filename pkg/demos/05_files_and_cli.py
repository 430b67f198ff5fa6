"""File formats and the batch CLI.

Writes the JSON/CSV inputs the command-line tool consumes and drives a few
invocations in-process.  The same commands work from a shell:

    alphaleak divergence p.json q.json --order inf
    alphaleak leakage joint.json --alpha 2 --measure realizable --check
    alphaleak verify-guessing p.json q.json --format json
"""

import json
import tempfile
from pathlib import Path

from alphaleak.cli import run

workdir = Path(tempfile.mkdtemp(prefix="alphaleak-demo-"))

(workdir / "p.json").write_text(json.dumps({"alphabet": ["a", "b"], "mass": [0.5, 0.5]}))
(workdir / "q.json").write_text(json.dumps({"alphabet": ["a", "b"], "mass": [0.25, 0.75]}))
(workdir / "joint.json").write_text(
    json.dumps({"x": ["a", "b"], "y": ["u", "v"], "mass": [[0.4, 0.1], [0.2, 0.3]]})
)
# matrices may come as CSV: header = output labels, first column = input labels
(workdir / "bsc.csv").write_text(",u,v\na,0.9,0.1\nb,0.1,0.9\n")

print(f"inputs in {workdir}\n")

invocations = [
    ["divergence", str(workdir / "p.json"), str(workdir / "q.json"), "--order", "inf"],
    ["divergence", str(workdir / "p.json"), str(workdir / "q.json"), "--order", "2",
     "--nats"],
    ["sibson", str(workdir / "p.json"), str(workdir / "bsc.csv"), "--order", "inf"],
    ["leakage", str(workdir / "joint.json"), "--alpha", "2", "--measure", "realizable",
     "--check"],
    ["verify-log-gain", str(workdir / "p.json"), str(workdir / "q.json"),
     "--m-star-schedule", "16,1024,65536"],
    ["sweep", str(workdir / "joint.json"), "--alphas", "1.5,2,5",
     "--measures", "opportunistic,realizable"],
]

for argv in invocations:
    print(f"$ alphaleak {' '.join(argv)}")
    code = run(argv)
    print(f"(exit {code})\n")

print("Validation failures exit with code 2 and name the file and invariant:")
(workdir / "broken.json").write_text(
    json.dumps({"x": ["a", "b"], "y": ["u", "v"], "mass": [[0.5, 0.1], [0.3, 0.3]]})
)
code = run(["leakage", str(workdir / "broken.json"), "--alpha", "2",
            "--measure", "realizable"])
print(f"(exit {code})")
