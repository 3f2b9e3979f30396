#!/usr/bin/env python3
# Copyright 2026 The xemb Authors. All Rights Reserved.
#
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
"""Builds the bundled x86-64/ARM mini-corpus.

Random C functions are compiled with clang for x86-64 (Intel syntax) and
ARMv7. With value names kept, the assembly printer annotates every machine
basic block with the name of the IR block it came from, so blocks that share a
function and an IR block name are paired as equivalent.

Outputs (in --out-dir):
  train.jsonl               raw corpus records used for training
  heldout_blocks.jsonl      labeled block pairs (1 = equivalent, -1 = random)
  instr_pairs.tsv           labeled same-architecture instruction pairs
  instr_exceptions.tsv      cross-opcode pairs treated as similar (sidecar)
  MANIFEST.json             counts and the frozen regression values
"""

import argparse
import json
import os
import random
import re
import subprocess
import sys
import tempfile

TARGETS = {
    "x86": ["--target=x86_64-linux-gnu", "-masm=intel"],
    "arm": ["--target=armv7-linux-gnueabihf"],
}

EXTERNS = """
extern int printf(const char *, ...);
extern int puts(const char *);
extern void *memcpy(void *, const void *, unsigned long);
extern int strcmp(const char *, const char *);
extern unsigned long strlen(const char *);
extern int ext_read(int);
extern void ext_write(int, int);
extern int ext_check(const char *, int);
extern long ext_hash(long, long);
int g_count;
int g_table[64];
long g_total;
const char *g_name;
"""

BINOPS = ["+", "-", "*", "&", "|", "^", "<<", ">>", "/", "%"]
CMPOPS = ["<", ">", "<=", ">=", "==", "!="]
WORDS = ["ok", "error", "value %d", "size=%d", "done", "retry", "x=%d y=%d", "fail: %s"]


class FunctionGen:
    def __init__(self, rng, name):
        self.rng = rng
        self.name = name
        self.ints = ["a", "b"]
        self.longs = ["c"]
        self.depth = 0
        self.lines = []
        self.nlocal = 0

    def const(self):
        r = self.rng.random()
        if r < 0.5:
            return str(self.rng.randint(1, 16))
        if r < 0.8:
            return str(self.rng.choice([31, 100, 255, 1000, 4096, 65535]))
        return "-" + str(self.rng.randint(1, 50))

    def atom(self):
        r = self.rng.random()
        if r < 0.45:
            return self.rng.choice(self.ints)
        if r < 0.6:
            return self.const()
        if r < 0.72:
            return "p[%s]" % self.rng.choice([self.const().lstrip("-"), self.rng.choice(self.ints) + " & 63"])
        if r < 0.8:
            return "g_table[%s & 63]" % self.rng.choice(self.ints)
        if r < 0.88:
            return "g_count"
        if r < 0.94:
            return "(int)%s" % self.rng.choice(self.longs)
        return "s[%s]" % self.rng.randint(0, 7)

    def expr(self, depth=0):
        if depth >= 2 or self.rng.random() < 0.35:
            return self.atom()
        op = self.rng.choice(BINOPS)
        left = self.expr(depth + 1)
        right = self.expr(depth + 1)
        if op in ("/", "%"):
            right = "(%s | 1)" % right
        if op in ("<<", ">>"):
            right = str(self.rng.randint(1, 7))
        return "(%s %s %s)" % (left, op, right)

    def cond(self):
        r = self.rng.random()
        if r < 0.7:
            return "%s %s %s" % (self.expr(1), self.rng.choice(CMPOPS), self.atom())
        if r < 0.85:
            return "%s && %s" % (self.atom(), self.atom())
        return "ext_check(s, %s)" % self.atom()

    def emit(self, text):
        self.lines.append("  " * (self.depth + 1) + text)

    def new_local(self, type_="int"):
        name = "v%d" % self.nlocal
        self.nlocal += 1
        self.emit("%s %s = %s;" % (type_, name, self.expr()))
        (self.ints if type_ == "int" else self.longs).append(name)

    def statement(self, budget):
        r = self.rng.random()
        if r < 0.22 or budget <= 1:
            target = self.rng.choice([v for v in self.ints if v not in ("a", "b")] or ["a"])
            self.emit("%s %s= %s;" % (target, self.rng.choice(["", "+", "-", "^", "|"]), self.expr()))
        elif r < 0.30:
            self.new_local(self.rng.choice(["int", "int", "long"]))
        elif r < 0.38:
            self.emit("p[%d] = %s;" % (self.rng.randint(0, 15), self.expr()))
        elif r < 0.44:
            self.emit("%s = %s;" % (self.rng.choice(["g_count", "g_table[a & 63]", "g_total"]), self.expr()))
        elif r < 0.54:
            call = self.rng.choice([
                'printf("%s", %s)' % (self.rng.choice(WORDS), self.atom()),
                'puts("%s")' % self.rng.choice(WORDS),
                "ext_write(%s, %s)" % (self.atom(), self.atom()),
                "g_total += ext_hash(%s, %s)" % (self.rng.choice(self.longs), self.atom()),
                "%s = ext_read(%s)" % (self.rng.choice(self.ints), self.atom()),
                "g_count += (int)strlen(s)",
                "memcpy(p, p + %d, %d)" % (self.rng.randint(1, 8), 4 * self.rng.randint(1, 8)),
                "%s += strcmp(s, g_name)" % self.rng.choice(self.ints),
            ])
            self.emit(call + ";")
        elif r < 0.72 and self.depth < 3:
            self.emit("if (%s) {" % self.cond())
            self.block(budget // 2)
            if self.rng.random() < 0.6:
                self.emit("} else {")
                self.block(budget // 3)
            self.emit("}")
        elif r < 0.84 and self.depth < 3:
            i = "i%d" % self.nlocal
            self.nlocal += 1
            self.emit("for (int %s = 0; %s < %s; %s++) {" % (i, i, self.rng.choice(["a", "b", "16", "n"]), i))
            self.ints.append(i)
            self.block(budget // 2)
            self.ints.remove(i)
            self.emit("}")
        elif r < 0.90 and self.depth < 3:
            self.emit("while (%s) {" % self.cond())
            self.block(budget // 3)
            self.emit("%s--;" % self.rng.choice(["a", "b"]))
            self.emit("if (%s) break;" % self.cond())
            self.emit("}")
        elif self.depth < 2:
            self.emit("switch (%s & 7) {" % self.rng.choice(self.ints))
            for case in self.rng.sample(range(8), self.rng.randint(2, 5)):
                self.emit("case %d: {" % case)
                self.block(1)
                self.emit("  break;")
                self.emit("}")
            self.emit("default: {")
            self.block(1)
            self.emit("}")
            self.emit("}")
        else:
            self.emit("%s = %s;" % (self.rng.choice(self.ints), self.expr()))

    def block(self, budget):
        scope = (list(self.ints), list(self.longs))
        self.depth += 1
        for _ in range(max(1, self.rng.randint(1, max(1, budget)))):
            self.statement(max(1, budget - 1))
        self.depth -= 1
        self.ints, self.longs = scope

    def render(self):
        self.lines = []
        self.depth = 0
        self.new_local()
        self.block(self.rng.randint(4, 9))
        ret = self.rng.choice(["a", "b", "v0", self.expr()])
        body = "\n".join(self.lines)
        return "int %s(int a, int b, long c, int n, int *p, const char *s) {\n%s\n  return %s;\n}\n" % (
            self.name, body, ret)


LABEL_RE = re.compile(r"^(?:\.LBB\d+_\d+:|[@#] %bb\.\d+:)\s*(?:[@#]\s*%(\S+))?")


def strip_comment(line, arch):
    idx = line.find("@" if arch == "arm" else "#")
    return line if idx < 0 else line[:idx]


def parse_asm(text, arch):
    """Returns {function: {ir_block_name: [instructions]}}.

    A machine block without an IR name ends the current block. Several machine
    blocks lowered from one IR block are concatenated in layout order.
    """
    functions = {}
    current_fn = None
    current_block = None
    blocks = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if not line:
            continue
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*):", line)
        if m:
            current_fn = m.group(1)
            blocks = functions.setdefault(current_fn, {})
            current_block = None
            continue
        if current_fn is None:
            continue
        if line.startswith(".Lfunc_end"):
            current_fn = None
            current_block = None
            continue
        lm = LABEL_RE.match(line)
        if lm:
            name = lm.group(1)
            if name is None:
                current_block = None
                continue
            current_block = name
            blocks.setdefault(name, [])
            continue
        stripped = line.strip()
        if stripped.startswith(".") or stripped.startswith("@") or stripped.startswith("#"):
            # directive, local label (.LPC0_0:, .Ltmp0:) or comment
            continue
        if current_block is None:
            continue
        ins = strip_comment(stripped, arch).strip()
        if not ins or ins.endswith(":"):
            continue
        ins = re.sub(r"\s+", " ", ins.replace("\t", " "))
        blocks[current_block].append(ins)
    out = {}
    for fn, blks in functions.items():
        out[fn] = {k: v for k, v in blks.items() if v}
    return out


def compile_file(src, arch, opt, workdir):
    asm = os.path.join(workdir, "out.%s.s" % arch)
    cmd = ["clang", "-S", opt, "-fno-discard-value-names", "-fno-asynchronous-unwind-tables",
           "-w", "-o", asm, src] + TARGETS[arch]
    subprocess.run(cmd, check=True)
    with open(asm) as f:
        return f.read()


# Cross-opcode pairs that are semantically close; kept out of the main label
# file, which follows the same-opcode rule.
EXCEPTIONS = [
    ("x86", "cmp", "x86", "test"),
    ("arm", "cmp", "arm", "tst"),
    ("x86", "add", "x86", "lea"),
    ("arm", "add", "arm", "adr"),
    ("x86", "movsxd", "x86", "movsx"),
]


def write_instruction_pairs(args, rng):
    """Samples same-architecture labeled pairs from the normalized training corpus.

    Positives share an opcode but differ in operands; negatives have different
    opcodes. 50 of each per architecture.
    """
    normalized = os.path.join(args.out_dir, "train.normalized.jsonl")
    subprocess.run([args.xemb, "preprocess", "--corpus", os.path.join(args.out_dir, "train.jsonl"),
                    "--out", normalized], check=True, stdout=subprocess.DEVNULL)
    counts = {}
    with open(normalized) as f:
        for line in f:
            r = json.loads(line)
            for side in ("a", "b"):
                arch = r[side]["arch"]
                for ins in r[side]["ins"]:
                    counts.setdefault(arch, {}).setdefault(ins, 0)
                    counts[arch][ins] += 1
    os.remove(normalized)

    rows = []
    for arch in sorted(counts):
        frequent = sorted(t for t, c in counts[arch].items() if c >= 3)
        by_opcode = {}
        for t in frequent:
            by_opcode.setdefault(t.split(" ")[0], []).append(t)
        multi = sorted(op for op, ts in by_opcode.items() if len(ts) >= 2)
        seen = set()
        while sum(1 for r in rows if r[0] == arch and r[4] == 1) < 50:
            op = rng.choice(multi)
            a, b = rng.sample(by_opcode[op], 2)
            if (a, b) in seen or (b, a) in seen:
                continue
            seen.add((a, b))
            rows.append((arch, a, arch, b, 1))
        while sum(1 for r in rows if r[0] == arch and r[4] == -1) < 50:
            a, b = rng.sample(frequent, 2)
            if a.split(" ")[0] == b.split(" ")[0] or (a, b) in seen or (b, a) in seen:
                continue
            seen.add((a, b))
            rows.append((arch, a, arch, b, -1))
    with open(os.path.join(args.out_dir, "instr_pairs.tsv"), "w") as f:
        for row in rows:
            f.write("\t".join(str(x) for x in row) + "\n")

    with open(os.path.join(args.out_dir, "instr_exceptions.tsv"), "w") as f:
        for arch_a, op_a, arch_b, op_b in EXCEPTIONS:
            left = sorted(t for t, c in counts.get(arch_a, {}).items() if t.split(" ")[0] == op_a and c >= 3)
            right = sorted(t for t, c in counts.get(arch_b, {}).items() if t.split(" ")[0] == op_b and c >= 3)
            if left and right:
                f.write("\t".join([arch_a, rng.choice(left), arch_b, rng.choice(right), "1"]) + "\n")


FROZEN_TRAIN_ARGS = ["--min-count", "1", "--subsample", "1e-3", "--dim", "100",
                     "--seed", "1", "--workers", "1"]


def last_auc(cmd):
    out = subprocess.run(cmd, check=True, capture_output=True, text=True).stdout
    return float(out.strip().splitlines()[-1].split("\t")[1])


def freeze(args):
    """Trains once with the pinned configuration and records the AUCs."""
    with tempfile.TemporaryDirectory() as tmp:
        model = os.path.join(tmp, "mini.bin")
        subprocess.run([args.xemb, "train", "--corpus", os.path.join(args.out_dir, "train.jsonl"),
                        "--model", model] + FROZEN_TRAIN_ARGS, check=True, stdout=subprocess.DEVNULL)
        blocks = os.path.join(args.out_dir, "heldout_blocks.jsonl")
        return {
            "train_args": FROZEN_TRAIN_ARGS,
            "embedding_auc": last_auc([args.xemb, "eval-blocks", "--model", model, "--pairs", blocks]),
            "baseline_auc": last_auc([args.xemb, "eval-blocks", "--baseline", "--pairs", blocks]),
            "instruction_auc": last_auc([args.xemb, "eval-instr", "--model", model, "--pairs",
                                         os.path.join(args.out_dir, "instr_pairs.tsv")]),
        }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", required=True)
    ap.add_argument("--functions", type=int, default=1000)
    ap.add_argument("--per-file", type=int, default=20)
    ap.add_argument("--heldout", type=float, default=0.15)
    ap.add_argument("--seed", type=int, default=20261019)
    ap.add_argument("--xemb", default="build/xemb", help="path to the xemb binary")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    pairs = []
    with tempfile.TemporaryDirectory() as workdir:
        for start in range(0, args.functions, args.per_file):
            names = ["fn%04d" % i for i in range(start, min(args.functions, start + args.per_file))]
            src = EXTERNS + "\n".join(FunctionGen(rng, n).render() for n in names)
            path = os.path.join(workdir, "unit.c")
            with open(path, "w") as f:
                f.write(src)
            opt = rng.choice(["-O1", "-O2"])
            parsed = {arch: parse_asm(compile_file(path, arch, opt, workdir), arch) for arch in TARGETS}
            for fn in names:
                x86 = parsed["x86"].get(fn, {})
                arm = parsed["arm"].get(fn, {})
                for block in sorted(set(x86) & set(arm)):
                    pairs.append({"id": "%s/%s" % (fn, block),
                                  "a": {"arch": "x86", "ins": x86[block]},
                                  "b": {"arch": "arm", "ins": arm[block]},
                                  "normalized": False})

    rng.shuffle(pairs)
    n_held = int(len(pairs) * args.heldout)
    heldout, train = pairs[:n_held], pairs[n_held:]
    train.sort(key=lambda r: r["id"])

    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "train.jsonl"), "w") as f:
        for r in train:
            f.write(json.dumps(r, sort_keys=True) + "\n")

    labeled = []
    for i, r in enumerate(heldout):
        labeled.append(dict(r, label=1))
        j = rng.randrange(len(heldout) - 1)
        if j >= i:
            j += 1
        other = heldout[j]
        labeled.append({"id": "%s~%s" % (r["id"], other["id"]), "a": r["a"], "b": other["b"],
                        "normalized": False, "label": -1})
    with open(os.path.join(args.out_dir, "heldout_blocks.jsonl"), "w") as f:
        for r in labeled:
            f.write(json.dumps(r, sort_keys=True) + "\n")

    write_instruction_pairs(args, rng)

    manifest = {
        "train_pairs": len(train),
        "heldout_pairs": len(heldout),
        "heldout_labeled": len(labeled),
        "generator": {"functions": args.functions, "seed": args.seed,
                      "clang": subprocess.run(["clang", "--version"], capture_output=True,
                                              text=True).stdout.splitlines()[0]},
    }
    manifest["frozen"] = freeze(args)
    with open(os.path.join(args.out_dir, "MANIFEST.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    print("train pairs %d, held-out pairs %d" % (len(train), len(heldout)), file=sys.stderr)


if __name__ == "__main__":
    main()
