#!/usr/bin/env python3
"""Regenerates src/ascii_fold_data.inc.

For every codepoint up to U+2FFFF the table records an ASCII replacement
derived from the Unicode compatibility decomposition (NFKD): combining marks
are removed from the decomposition and the remaining ASCII characters are
kept. Decimal digits of any script map to their digit value. A small manual
list covers common punctuation whose decomposition is not ASCII.

Run from the repository root:

    python3 scripts/gen_ascii_fold.py > src/ascii_fold_data.inc
"""

import sys
import unicodedata

MAX_CP = 0x2FFFF

# Punctuation folded by convention rather than by decomposition.
MANUAL = {
    0x2010: "-", 0x2011: "-", 0x2012: "-", 0x2013: "-", 0x2014: "-",
    0x2015: "-", 0x2018: "'", 0x2019: "'", 0x201A: "'", 0x201B: "'",
    0x201C: '"', 0x201D: '"', 0x201E: '"', 0x2026: "...", 0x2044: "/",
    0x2212: "-", 0x00AB: '"', 0x00BB: '"', 0x2039: "'", 0x203A: "'",
    0x00AD: "",  # soft hyphen disappears
    # script-specific sentence punctuation
    0x060C: ",", 0x061B: ";", 0x061F: "?", 0x06D4: ".",
    0x0589: ".", 0x05BE: "-", 0x05C3: ".",
    0x0964: ".", 0x0965: ".",
    0x3001: ",", 0x3002: ".", 0x30FB: " ",
}


def fold(cp: int) -> str | None:
    if cp in MANUAL:
        return MANUAL[cp]
    ch = chr(cp)
    cat = unicodedata.category(ch)
    if cat in ("Cs", "Co", "Cn"):
        return None
    decomposed = unicodedata.normalize("NFKD", ch)
    pieces = []
    for c in decomposed:
        if unicodedata.category(c) in ("Mn", "Me"):
            continue
        if ord(c) < 0x80:
            pieces.append(c)
        elif ord(c) in MANUAL:
            pieces.append(MANUAL[ord(c)])
    kept = "".join(pieces)
    if kept and all(0x20 <= ord(c) < 0x7F for c in kept):
        if kept != ch:
            return kept
    if cat == "Nd":
        d = unicodedata.digit(ch, None)
        if d is not None:
            return str(d)
    return None


def cstr(s: str) -> str:
    out = []
    for c in s:
        if c == "\\":
            out.append("\\\\")
        elif c == '"':
            out.append('\\"')
        else:
            out.append(c)
    return '"' + "".join(out) + '"'


def main() -> None:
    w = sys.stdout.write
    w("// Generated by scripts/gen_ascii_fold.py (Unicode %s). Do not edit.\n"
      % unicodedata.unidata_version)
    w("// clang-format off\n")
    entries = []
    for cp in range(0x80, MAX_CP + 1):
        r = fold(cp)
        if r is not None:
            entries.append((cp, r))
    w("inline constexpr AsciiFoldEntry kAsciiFoldTable[] = {\n")
    for cp, r in entries:
        w("    {0x%X, %s},\n" % (cp, cstr(r)))
    w("};\n")
    w("// clang-format on\n")


if __name__ == "__main__":
    main()
