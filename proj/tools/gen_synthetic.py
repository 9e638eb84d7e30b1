#!/usr/bin/env python3
# Copyright 2026 The LBLL Attack Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Deterministic generator for ISCAS'89-style synthetic sequential circuits.

Gates are drawn with a NAND/NOR-heavy mix, fan-ins favour recently created
nets (so cones get depth) and every flip-flop output is consumed. Dead logic
is removed before writing.

    gen_synthetic.py OUTDIR        writes the bundled syn*.bench suite
"""

import os
import random
import sys

KINDS = [("NAND", 30), ("NOR", 18), ("AND", 14), ("OR", 14), ("NOT", 14),
         ("XOR", 4), ("BUF", 3), ("XNOR", 3)]

SUITE = [
    # name, seed, PIs, POs, FFs, gates
    ("syn1", 101, 6, 5, 24, 150),
    ("syn2", 102, 8, 6, 32, 210),
    ("syn3", 103, 10, 8, 40, 260),
    ("syn4", 104, 12, 10, 48, 330),
    ("syn5", 105, 14, 12, 64, 440),
    ("syn6", 106, 16, 14, 80, 560),
]


def pick_kind(rng):
    total = sum(w for _, w in KINDS)
    r = rng.uniform(0, total)
    for k, w in KINDS:
        r -= w
        if r <= 0:
            return k
    return KINDS[0][0]


def generate(name, seed, n_pi, n_po, n_ff, n_gates):
    rng = random.Random(seed)
    pis = [f"I{i}" for i in range(n_pi)]
    ffs = [f"Q{i}" for i in range(n_ff)]
    nets = pis + ffs
    unused = set(nets)
    gates = []
    for g in range(n_gates):
        kind = pick_kind(rng)
        arity = 1 if kind in ("NOT", "BUF") else (3 if rng.random() < 0.2 else 2)
        ins = []
        while len(ins) < arity:
            if unused and rng.random() < 0.45:
                cand = sorted(unused)[rng.randrange(len(unused))]
            elif rng.random() < 0.7:
                window = nets[-24:]
                cand = window[rng.randrange(len(window))]
            else:
                cand = nets[rng.randrange(len(nets))]
            if cand not in ins:
                ins.append(cand)
        out = f"N{g}"
        for i in ins:
            unused.discard(i)
        gates.append((out, kind, ins))
        nets.append(out)
        unused.add(out)
    gate_nets = [g[0] for g in gates]
    late = gate_nets[len(gate_nets) // 3:]
    ff_data = {}
    for q in ffs:
        pool = [n for n in late if n in unused] or late
        d = pool[rng.randrange(len(pool))]
        unused.discard(d)
        ff_data[q] = d
    outputs = []
    while len(outputs) < n_po:
        pool = [n for n in gate_nets if n in unused and n not in outputs]
        pool = pool or [n for n in late if n not in outputs]
        o = pool[rng.randrange(len(pool))]
        unused.discard(o)
        outputs.append(o)
    # drop dead gates
    live = set(outputs) | set(ff_data.values())
    kept = []
    for out, kind, ins in reversed(gates):
        if out in live:
            kept.append((out, kind, ins))
            live.update(ins)
    kept.reverse()
    lines = [f"# {name}: synthetic sequential benchmark (seed {seed})"]
    lines += [f"INPUT({p})" for p in pis]
    lines += [f"OUTPUT({o})" for o in outputs]
    lines += [f"{q} = DFF({ff_data[q]})" for q in ffs]
    lines += [f"{out} = {kind}({', '.join(ins)})" for out, kind, ins in kept]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    for spec in SUITE:
        with open(os.path.join(outdir, spec[0] + ".bench"), "w") as f:
            f.write(generate(*spec))
