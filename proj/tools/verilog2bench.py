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

"""Convert flat gate-level structural Verilog (nand/nor/not/... primitives,
`ff`/`fflopd` flip-flop cells, `assign`) into the .bench dialect."""

import re
import sys

PRIMS = {"and": "AND", "nand": "NAND", "or": "OR", "nor": "NOR",
         "xor": "XOR", "xnor": "XNOR", "not": "NOT", "buf": "BUF"}
FF_CELLS = {"ff", "fflopd", "dff"}


def statements(text):
    text = re.sub(r"//.*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    # only the first module; helper cell definitions follow it
    body = text.split("endmodule")[0]
    for stmt in body.split(";"):
        stmt = " ".join(stmt.split())
        if stmt:
            yield stmt


def convert(text, clock="clock"):
    inputs, outputs, lines = [], [], []
    for stmt in statements(text):
        head = stmt.split(" ", 1)[0]
        if head == "module":
            continue
        if head in ("input", "output"):
            names = [n.strip() for n in stmt[len(head):].split(",")]
            (inputs if head == "input" else outputs).extend(n for n in names if n)
            continue
        if head in ("wire", "reg"):
            continue
        if head == "assign":
            lhs, rhs = [s.strip() for s in stmt[len("assign"):].split("=")]
            if rhs in ("1'b0", "1'b1"):
                lines.append(f"{lhs} = {'CONST1' if rhs.endswith('1') else 'CONST0'}()")
            else:
                lines.append(f"{lhs} = BUF({rhs})")
            continue
        if head in PRIMS:
            pins = re.search(r"\((.*)\)", stmt).group(1)
            nets = [p.strip() for p in pins.split(",")]
            lines.append(f"{nets[0]} = {PRIMS[head]}({', '.join(nets[1:])})")
            continue
        if head in FF_CELLS:
            conn = dict(re.findall(r"\.(\w+)\s*\(\s*([^)\s]+)\s*\)", stmt))
            lines.append(f"{conn['Q']} = DFF({conn['D']})")
            continue
        raise SystemExit(f"unsupported statement: {stmt[:80]}")
    out = [f"INPUT({n})" for n in inputs if n not in ("clk", clock)]
    out += [f"OUTPUT({n})" for n in outputs]
    return "\n".join(out + lines) + "\n"


if __name__ == "__main__":
    src = open(sys.argv[1]).read()
    sys.stdout.write(f"# converted from {sys.argv[1].split('/')[-1]}\n")
    sys.stdout.write(convert(src))
