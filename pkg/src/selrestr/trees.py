"""Reader for skeletal bracketed parse trees.

Accepts the flat s-expression style used by treebank corpora: one or
more trees per input, ``(LABEL child child ...)`` for constituents and
``(TAG token)`` for leaves.  Whitespace between tokens is free-form, so
trees may span lines.
"""

from __future__ import annotations

from dataclasses import dataclass


class TreeSyntaxError(ValueError):
    """Ill-formed bracketing; ``offset`` is the byte position in the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


@dataclass(frozen=True)
class ParseTree:
    """A constituent (with children) or a tagged leaf (with a token)."""

    label: str
    children: tuple["ParseTree", ...] = ()
    token: str | None = None

    def __post_init__(self):
        if not self.label:
            raise ValueError("empty node label")
        if bool(self.children) == (self.token is not None):
            raise ValueError(f"node {self.label!r} must have children or a token, not both")

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list["ParseTree"]:
        if self.is_leaf:
            return [self]
        out: list[ParseTree] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def subtrees(self):
        """All nodes in preorder, this one included."""
        yield self
        for child in self.children:
            yield from child.subtrees()

    def tokens(self) -> list[str]:
        return [leaf.token for leaf in self.leaves()]

    def __str__(self) -> str:
        if self.is_leaf:
            return f"({self.label} {self.token})"
        return f"({self.label} {' '.join(str(c) for c in self.children)})"


def leaf(label: str, token: str) -> ParseTree:
    return ParseTree(label, token=token)


def node(label: str, *children: ParseTree) -> ParseTree:
    return ParseTree(label, children=tuple(children))


def _tokenize(text: str):
    """Yield (offset, token) with token one of "(", ")" or an atom."""
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            yield i, ch
            i += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "()":
                i += 1
            yield start, text[start:i]


def parse_bracketed(text: str) -> list[ParseTree]:
    """Parse every top-level tree in ``text``, preserving input order."""
    trees: list[ParseTree] = []
    # Stack frames: [open-paren offset, label or None, children, leaf tokens].
    stack: list[list] = []
    for offset, tok in _tokenize(text):
        if tok == "(":
            stack.append([offset, None, [], []])
        elif tok == ")":
            if not stack:
                raise TreeSyntaxError("unbalanced parentheses: unexpected ')'", offset)
            open_at, label, children, atoms = stack.pop()
            if label is None:
                raise TreeSyntaxError("empty constituent", open_at)
            if atoms and children:
                raise TreeSyntaxError(
                    f"constituent {label!r} mixes tokens and sub-constituents", open_at
                )
            if len(atoms) > 1:
                raise TreeSyntaxError(f"leaf {label!r} has more than one token", open_at)
            if atoms:
                tree = ParseTree(label, token=atoms[0])
            elif children:
                tree = ParseTree(label, children=tuple(children))
            else:
                raise TreeSyntaxError("empty constituent", open_at)
            if stack:
                stack[-1][2].append(tree)
            else:
                trees.append(tree)
        else:
            if not stack:
                raise TreeSyntaxError(f"token {tok!r} outside any tree", offset)
            frame = stack[-1]
            if frame[1] is None:
                frame[1] = tok
            else:
                frame[3].append(tok)
    if stack:
        raise TreeSyntaxError("unbalanced parentheses: unclosed '('", len(text))
    return trees


def read_trees(path) -> list[ParseTree]:
    with open(path, encoding="utf-8") as f:
        return parse_bracketed(f.read())
