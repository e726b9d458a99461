"""Line-oriented text formats for matroids, graphs and labelings.

    matroid n=<n> r=<r>        sparsepaving n=<n> r=<r>       graph v=<count>
    b <id> <id> ...            h <id> <id> ...                e <u> <v>

    labels group=<spec>
    l <element-id> <value>
    forbid <value> ...

A labels file may hold several `labels` sections; each section is one
constraint (labeling + forbidden values). Blank lines and `#` comments are
ignored. Every parse error is a FormatError carrying path and line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from ..errors import FormatError, MatroidError
from .bitsets import ids_of, mask_of
from .labels import AbelianGroup, ForbiddenSet, GroupElement, Labeling, parse_group_spec
from .matroid import Matroid, SparsePavingRep, make_graphic, make_sparse_paving, sparse_paving_rep

logger = logging.getLogger("matroidlab.formats")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class LabelSection:
    psi: Labeling
    forbidden: ForbiddenSet


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            yield lineno, stripped.split()


def _header_fields(tokens: Sequence[str], keys: Sequence[str], *, path: Optional[str], line: int) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for token in tokens[1:]:
        if "=" not in token:
            raise FormatError(f"expected key=value in header, got '{token}'", path=path, line=line)
        key, value = token.split("=", 1)
        fields[key] = value
    for key in keys:
        if key not in fields:
            raise FormatError(f"header is missing '{key}='", path=path, line=line)
    return fields


def _int_field(fields: Dict[str, str], key: str, *, path: Optional[str], line: int) -> int:
    try:
        return int(fields[key])
    except ValueError as exc:
        raise FormatError(f"'{key}' must be an integer, got '{fields[key]}'", path=path, line=line) from exc


def _id_mask(tokens: Sequence[str], n: int, *, path: Optional[str], line: int) -> int:
    try:
        ids = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"bad element id in '{' '.join(tokens)}'", path=path, line=line) from exc
    if any(e >= n for e in ids):
        raise FormatError(f"element id out of range 0..{n - 1}", path=path, line=line)
    if ids != sorted(ids):
        raise FormatError("element ids must be ascending", path=path, line=line)
    try:
        return mask_of(ids)
    except MatroidError as exc:
        raise FormatError(str(exc), path=path, line=line) from exc


def parse_matroid_text(text: str, *, path: Optional[str] = None, validate: bool = True) -> Matroid:
    """Parse any of the three matroid-bearing formats."""
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty matroid file", path=path, line=1)
    header_line, header = lines[0]
    kind = header[0]
    body = lines[1:]

    if kind == "matroid":
        fields = _header_fields(header, ("n", "r"), path=path, line=header_line)
        n = _int_field(fields, "n", path=path, line=header_line)
        r = _int_field(fields, "r", path=path, line=header_line)
        bases = []
        for lineno, tokens in body:
            if tokens[0] != "b":
                raise FormatError(f"expected 'b' line, got '{tokens[0]}'", path=path, line=lineno)
            mask = _id_mask(tokens[1:], n, path=path, line=lineno)
            if len(tokens) - 1 != r:
                raise FormatError(f"basis has {len(tokens) - 1} elements, rank is {r}", path=path, line=lineno)
            bases.append(mask)
        try:
            return Matroid.from_bases(n, bases, validate=validate)
        except MatroidError as exc:
            raise FormatError(str(exc), path=path, line=header_line) from exc

    if kind == "sparsepaving":
        fields = _header_fields(header, ("n", "r"), path=path, line=header_line)
        n = _int_field(fields, "n", path=path, line=header_line)
        r = _int_field(fields, "r", path=path, line=header_line)
        hyperplanes = []
        for lineno, tokens in body:
            if tokens[0] != "h":
                raise FormatError(f"expected 'h' line, got '{tokens[0]}'", path=path, line=lineno)
            hyperplanes.append(_id_mask(tokens[1:], n, path=path, line=lineno))
        try:
            return make_sparse_paving(SparsePavingRep.of(n, r, hyperplanes))
        except MatroidError as exc:
            raise FormatError(str(exc), path=path, line=header_line) from exc

    if kind == "graph":
        fields = _header_fields(header, ("v",), path=path, line=header_line)
        v = _int_field(fields, "v", path=path, line=header_line)
        edges = []
        for lineno, tokens in body:
            if tokens[0] != "e" or len(tokens) != 3:
                raise FormatError("expected 'e <u> <v>'", path=path, line=lineno)
            try:
                u, w = int(tokens[1]), int(tokens[2])
            except ValueError as exc:
                raise FormatError("bad vertex id", path=path, line=lineno) from exc
            if not (0 <= u < v and 0 <= w < v):
                raise FormatError(f"vertex out of range 0..{v - 1}", path=path, line=lineno)
            edges.append((u, w))
        try:
            return make_graphic(edges, num_vertices=v)
        except MatroidError as exc:
            raise FormatError(str(exc), path=path, line=header_line) from exc

    raise FormatError(f"unknown matroid header '{kind}'", path=path, line=header_line)


def load_matroid(path: PathLike, *, validate: bool = True) -> Matroid:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=str(path)) from exc
    matroid = parse_matroid_text(text, path=str(path), validate=validate)
    logger.debug("loaded %s: n=%d r=%d bases=%d", path, matroid.n, matroid.r, len(matroid.bases))
    return matroid


def format_matroid(matroid: Matroid) -> str:
    lines = [f"matroid n={matroid.n} r={matroid.r}"]
    for b in matroid.bases:
        lines.append(" ".join(["b", *(str(e) for e in ids_of(b))]))
    return "\n".join(lines) + "\n"


def format_sparse_paving(rep: SparsePavingRep) -> str:
    lines = [f"sparsepaving n={rep.n} r={rep.r}"]
    for h in rep.hyperplanes:
        lines.append(" ".join(["h", *(str(e) for e in ids_of(h))]))
    return "\n".join(lines) + "\n"


def format_graph(edges: Sequence[Tuple[int, int]], num_vertices: int) -> str:
    lines = [f"graph v={num_vertices}"]
    lines.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def format_any(matroid: Matroid, *, prefer_sparse_paving: bool = False) -> str:
    if prefer_sparse_paving:
        rep = sparse_paving_rep(matroid)
        if rep is not None:
            return format_sparse_paving(rep)
    return format_matroid(matroid)


def _parse_value(group: AbelianGroup, tokens: Sequence[str], *, path: Optional[str], line: int) -> GroupElement:
    text = "".join(tokens)
    try:
        return group.parse(text)
    except FormatError as exc:
        raise FormatError(str(exc), path=path, line=line) from exc
    except MatroidError as exc:
        raise FormatError(str(exc), path=path, line=line) from exc


def parse_labels_text(text: str, *, n: Optional[int] = None, path: Optional[str] = None) -> List[LabelSection]:
    """Parse one or more `labels` sections. Every element must be labelled exactly once."""
    sections: List[LabelSection] = []
    group: Optional[AbelianGroup] = None
    values: Dict[int, GroupElement] = {}
    forbidden: List[GroupElement] = []
    start_line = 0

    def close(lineno: int) -> None:
        if group is None:
            return
        size_n = n if n is not None else (max(values) + 1 if values else 0)
        missing = [e for e in range(size_n) if e not in values]
        if missing:
            raise FormatError(f"elements without a label: {missing}", path=path, line=start_line)
        extra = [e for e in values if e >= size_n]
        if extra:
            raise FormatError(f"labels for elements outside 0..{size_n - 1}: {extra}", path=path, line=start_line)
        psi = Labeling(group, tuple(values[e] for e in range(size_n)))
        sections.append(LabelSection(psi, ForbiddenSet(group, frozenset(forbidden))))

    for lineno, tokens in _lines(text):
        head = tokens[0]
        if head == "labels":
            close(lineno)
            fields = _header_fields(tokens, ("group",), path=path, line=lineno)
            try:
                group = parse_group_spec(fields["group"])
            except FormatError as exc:
                raise FormatError(str(exc), path=path, line=lineno) from exc
            values, forbidden, start_line = {}, [], lineno
        elif group is None:
            raise FormatError("expected 'labels group=<spec>' header", path=path, line=lineno)
        elif head == "l":
            if len(tokens) < 3:
                raise FormatError("expected 'l <element-id> <value>'", path=path, line=lineno)
            try:
                e = int(tokens[1])
            except ValueError as exc:
                raise FormatError(f"bad element id '{tokens[1]}'", path=path, line=lineno) from exc
            if e < 0 or e in values:
                raise FormatError(f"element {e} labelled twice or negative", path=path, line=lineno)
            values[e] = _parse_value(group, tokens[2:], path=path, line=lineno)
        elif head == "forbid":
            forbidden.extend(_parse_value(group, [t], path=path, line=lineno) for t in tokens[1:])
        else:
            raise FormatError(f"unknown line type '{head}'", path=path, line=lineno)
    close(0)
    if not sections:
        raise FormatError("no 'labels' section found", path=path, line=1)
    return sections


def load_labels(path: PathLike, *, n: Optional[int] = None) -> List[LabelSection]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=str(path)) from exc
    return parse_labels_text(text, n=n, path=str(path))


def format_labels(psi: Labeling, forbidden: Optional[ForbiddenSet] = None) -> str:
    group = psi.group
    lines = [f"labels group={group.spec}"]
    lines.extend(f"l {e} {group.format(v)}" for e, v in enumerate(psi.values))
    if forbidden is not None:
        values = sorted(forbidden.elements, key=repr)
        lines.append(" ".join(["forbid", *(group.format(v) for v in values)]))
    return "\n".join(lines) + "\n"


def format_label_sections(sections: Sequence[LabelSection]) -> str:
    return "".join(format_labels(s.psi, s.forbidden) for s in sections)


def write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
