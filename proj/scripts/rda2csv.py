#!/usr/bin/env python3
"""Regenerate the CSVs in data/ from CRAN package tarballs.

The UCI adult, mushroom and zoo datasets are redistributed inside the
arules and mlbench R packages as .rda workspaces.  This script reads the
serialized R objects directly (no R required), restores the canonical
UCI column names, and writes plain CSVs with '?' marking missing cells.

Usage:
    rda2csv.py --arules arules_1.7.14.tar.gz --mlbench mlbench_2.1-7.tar.gz --out data

See data/README.md for the exact provenance notes.
"""

import argparse
import bz2
import csv
import gzip
import lzma
import struct
import tarfile

NA_INT = -2147483648


class PairList:
    __slots__ = ("tag", "car", "cdr")

    def __init__(self, tag, car, cdr):
        self.tag, self.car, self.cdr = tag, car, cdr


class RVec:
    """An R vector plus its attribute map."""

    __slots__ = ("values", "attrs")

    def __init__(self, values, attrs):
        self.values, self.attrs = values, attrs

    def strings(self):
        """Column cells as text; factors decoded through their levels, None = NA."""
        levels = self.attrs.get("levels")
        out = []
        for v in self.values:
            if v is None:
                out.append(None)
            elif levels is not None:
                out.append(levels.values[v - 1])
            elif isinstance(v, bool):
                out.append("1" if v else "0")
            elif isinstance(v, float) and v == int(v):
                out.append(str(int(v)))
            else:
                out.append(str(v))
        return out


def pairlist_to_dict(pl):
    d = {}
    while isinstance(pl, PairList):
        if isinstance(pl.tag, tuple) and pl.tag[0] == "sym":
            d[pl.tag[1]] = pl.car
        pl = pl.cdr
    return d


class RdaReader:
    """XDR deserializer for the SEXP subset that plain datasets use."""

    def __init__(self, data):
        self.b = data
        self.pos = 0
        self.refs = []

    def i4(self):
        v = struct.unpack_from(">i", self.b, self.pos)[0]
        self.pos += 4
        return v

    def f8(self):
        v = struct.unpack_from(">d", self.b, self.pos)[0]
        self.pos += 8
        return v

    def raw(self, n):
        v = self.b[self.pos:self.pos + n]
        self.pos += n
        return v

    def header(self):
        if self.raw(5) not in (b"RDX2\n", b"RDX3\n"):
            raise ValueError("not an RDX2/RDX3 RData payload")
        if self.raw(2) != b"X\n":
            raise ValueError("only XDR serialization is supported")
        version = self.i4()
        self.i4()
        self.i4()
        if version >= 3:
            self.raw(self.i4())  # native encoding name

    def item(self):
        flags = self.i4()
        t = flags & 0xFF
        has_attr = bool(flags & 0x200)
        has_tag = bool(flags & 0x400)

        if t == 0xFE:  # NILVALUE
            return None
        if t == 0xFF:  # reference into the preservation table
            idx = flags >> 8
            if idx == 0:
                idx = self.i4()
            return self.refs[idx - 1]
        if t == 0xEE:  # ALTREP: (class info, state, attributes)
            info = self.item()
            state = self.item()
            self.item()
            return self.altrep(info, state)
        if t == 1:  # symbol; registered in the ref table before its CHARSXP
            slot = len(self.refs)
            self.refs.append(None)
            sym = ("sym", self.item())
            self.refs[slot] = sym
            return sym
        if t in (2, 0xF0, 0xEF):  # pairlist (plain or attribute-carrying)
            if has_attr:
                self.item()
            tag = self.item() if has_tag else None
            car = self.item()
            cdr = self.item()
            return PairList(tag, car, cdr)
        if t == 9:  # CHARSXP
            n = self.i4()
            return None if n == -1 else self.raw(n).decode("utf-8", "replace")
        if t in (10, 13):  # logical / integer
            vals = [self.i4() for _ in range(self.i4())]
            if t == 10:
                vals = [None if v == NA_INT else bool(v) for v in vals]
            else:
                vals = [None if v == NA_INT else v for v in vals]
            return self.vec(vals, has_attr)
        if t == 14:  # real
            return self.vec([self.f8() for _ in range(self.i4())], has_attr)
        if t == 16:  # character
            return self.vec([self.item() for _ in range(self.i4())], has_attr)
        if t == 19:  # generic vector (list / data.frame payload)
            return self.vec([self.item() for _ in range(self.i4())], has_attr)
        if t == 24:  # raw
            return self.vec(list(self.raw(self.i4())), has_attr)
        if t == 25:  # S4: slots arrive as the attribute pairlist
            attrs = pairlist_to_dict(self.item()) if has_attr else {}
            return RVec([], attrs)
        raise ValueError("unsupported SEXP type %d at offset %d" % (t, self.pos))

    def vec(self, vals, has_attr):
        attrs = pairlist_to_dict(self.item()) if has_attr else {}
        return RVec(vals, attrs)

    def altrep(self, info, state):
        cls = info.car[1] if isinstance(info.car, tuple) else None
        if cls == "compact_intseq":
            n, start, step = state.values
            return RVec([int(start + i * step) for i in range(int(n))], {})
        if cls == "compact_realseq":
            n, start, step = state.values
            return RVec([start + i * step for i in range(int(n))], {})
        if cls and cls.startswith("wrap_"):
            return state.car if isinstance(state, PairList) else state
        raise ValueError("unsupported ALTREP class %r" % cls)


def decompress(raw):
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    if raw[:3] == b"BZh":
        return bz2.decompress(raw)
    if raw[:6] == b"\xfd7zXZ\x00":
        return lzma.decompress(raw)
    return raw


def load_rda(blob):
    """Top-level name -> RVec for one .rda payload."""
    r = RdaReader(decompress(blob))
    r.header()
    top = r.item()
    out = {}
    while isinstance(top, PairList):
        if isinstance(top.tag, tuple) and top.tag[0] == "sym":
            out[top.tag[1]] = top.car
        top = top.cdr
    return out


def rda_from_tar(tar_path, member_suffix):
    with tarfile.open(tar_path, "r:gz") as tf:
        for m in tf.getmembers():
            if m.name.endswith(member_suffix):
                return load_rda(tf.extractfile(m).read())
    raise FileNotFoundError("%s lacks %s" % (tar_path, member_suffix))


def frame_columns(frame):
    """data.frame -> (ordered column names, dict name -> cell strings)."""
    names = frame.attrs["names"].values
    return names, {nm: frame.values[j].strings() for j, nm in enumerate(names)}


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print("wrote %s (%d rows)" % (path, len(rows)))


def convert_adult(arules_tar, out_path):
    # AdultUCI = adult.data followed by adult.test; the test block carries no
    # income labels, so only the 32561 labeled training rows are exported.
    frame = rda_from_tar(arules_tar, "data/AdultUCI.rda")["AdultUCI"]
    names, cols = frame_columns(frame)
    n_train = sum(1 for v in cols["income"] if v is not None)
    header = [nm if nm != "income" else "salary" for nm in names]
    recode = {"small": "<=50K", "large": ">50K"}
    rows = []
    for i in range(n_train):
        row = []
        for nm in names:
            v = cols[nm][i]
            if v is None:
                v = "?"
            elif nm == "income":
                v = recode[v]
            row.append(v)
        rows.append(row)
    write_csv(out_path, header, rows)


MUSHROOM_COLUMNS = [
    ("Class", "edibility"),
    ("CapShape", "cap-shape"),
    ("CapSurf", "cap-surface"),
    ("CapColor", "cap-color"),
    ("Bruises", "bruises"),
    ("Odor", "odor"),
    ("GillAttached", "gill-attachment"),
    ("GillSpace", "gill-spacing"),
    ("GillSize", "gill-size"),
    ("GillColor", "gill-color"),
    ("StalkShape", "stalk-shape"),
    ("StalkRoot", "stalk-root"),
    ("SurfaceAboveRing", "stalk-surface-above-ring"),
    ("SurfaceBelowRing", "stalk-surface-below-ring"),
    ("ColorAboveRing", "stalk-color-above-ring"),
    ("ColorBelowRing", "stalk-color-below-ring"),
    ("VeilType", "veil-type"),
    ("VeilColor", "veil-color"),
    ("RingNumber", "ring-number"),
    ("RingType", "ring-type"),
    ("Spore", "spore-print-color"),
    ("Population", "population"),
    ("Habitat", "habitat"),
]


def convert_mushroom(arules_tar, out_path):
    # arules ships mushroom as a transactions object: an item-by-transaction
    # boolean matrix whose items are attribute=value pairs.  Every transaction
    # holds at most one item per attribute; an absent attribute is a missing
    # cell ('?' in the UCI original).
    obj = rda_from_tar(arules_tar, "data/Mushroom.rda")["Mushroom"]
    item_info = obj.attrs["itemInfo"]
    inames, icols = frame_columns(item_info)
    variables, levels = icols["variables"], icols["levels"]
    ng = obj.attrs["data"]  # ngCMatrix: rows are items, columns transactions
    ii, pp = ng.attrs["i"].values, ng.attrs["p"].values
    n_trans = ng.attrs["Dim"].values[1]
    rows = []
    for t in range(n_trans):
        rec = {}
        for k in range(pp[t], pp[t + 1]):
            rec[variables[ii[k]]] = levels[ii[k]]
        rows.append([rec.get(src, "?") for src, _ in MUSHROOM_COLUMNS])
    write_csv(out_path, [dst for _, dst in MUSHROOM_COLUMNS], rows)


def convert_zoo(mlbench_tar, out_path):
    # Row names (animal identifiers) are intentionally dropped: unique per row.
    frame = rda_from_tar(mlbench_tar, "data/Zoo.rda")["Zoo"]
    names, cols = frame_columns(frame)
    n = len(cols[names[0]])
    rows = [[cols[nm][i] for nm in names] for i in range(n)]
    write_csv(out_path, names, rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--arules", required=True, help="arules source tarball")
    ap.add_argument("--mlbench", required=True, help="mlbench source tarball")
    ap.add_argument("--out", default="data", help="output directory")
    args = ap.parse_args()
    convert_adult(args.arules, "%s/adult.csv" % args.out)
    convert_mushroom(args.arules, "%s/mushroom.csv" % args.out)
    convert_zoo(args.mlbench, "%s/zoo.csv" % args.out)


if __name__ == "__main__":
    main()
