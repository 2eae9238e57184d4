"""Hyponymy taxonomy and noun sense lexicon.

The taxonomy is a DAG of semantic classes: each class may have several
parents (multiple inheritance) and the graph may have several roots.  A
class is identified by an opaque string id; what it *means* is given
extensionally by the lexicon, which maps each noun lemma to the set of
classes naming its senses.  An ambiguous noun simply has several sense
classes.

File formats (UTF-8, tab-separated, ``#`` starts a comment line):

  taxonomy:  <class_id>\\t<comma-separated parent ids, or "-" for a root>
  lexicon:   <noun_lemma>\\t<comma-separated class_ids>

Both structures are immutable once loaded and safe to share across
threads; hypernym closures are memoized on the taxonomy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator


class TaxonomyError(ValueError):
    """Malformed taxonomy or lexicon input (carries a 1-based line number)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _iter_data_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        # Strip spaces and CR but keep tabs: a trailing tab means an empty field.
        line = raw.strip(" \r")
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, line


def _check_class_id(token: str, lineno: int) -> str:
    if not token:
        raise TaxonomyError("empty class id", lineno)
    if any(ch.isspace() for ch in token):
        raise TaxonomyError(f"class id {token!r} contains whitespace", lineno)
    return token


class Taxonomy:
    """A validated, immutable is-a hierarchy over class ids."""

    def __init__(self, parents: dict[str, set[str]], gloss: dict[str, str] | None = None):
        self._parents = {c: frozenset(ps) for c, ps in parents.items()}
        self.gloss = dict(gloss) if gloss else {}
        self._closures: dict[str, frozenset[str]] = {}
        self._check_dangling()
        self._check_acyclic()

    def _check_dangling(self) -> None:
        for child, ps in self._parents.items():
            for p in ps:
                if p not in self._parents:
                    raise TaxonomyError(f"class {child!r} names unknown parent {p!r}")

    def _check_acyclic(self) -> None:
        # Kahn's algorithm; whatever cannot be peeled off lies on a cycle.
        remaining = {c: set(ps) for c, ps in self._parents.items()}
        children: dict[str, set[str]] = {c: set() for c in remaining}
        for child, ps in self._parents.items():
            for p in ps:
                children[p].add(child)
        queue = [c for c, ps in remaining.items() if not ps]
        seen = 0
        while queue:
            node = queue.pop()
            seen += 1
            for ch in children[node]:
                remaining[ch].discard(node)
                if not remaining[ch]:
                    queue.append(ch)
        if seen != len(remaining):
            cyclic = sorted(c for c, ps in remaining.items() if ps)
            raise TaxonomyError(f"cycle detected among classes: {', '.join(cyclic)}")

    # -- queries ---------------------------------------------------------

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._parents)

    def __contains__(self, class_id: str) -> bool:
        return class_id in self._parents

    def __len__(self) -> int:
        return len(self._parents)

    def parents(self, class_id: str) -> frozenset[str]:
        try:
            return self._parents[class_id]
        except KeyError:
            raise TaxonomyError(f"unknown class {class_id!r}") from None

    def roots(self) -> frozenset[str]:
        return frozenset(c for c, ps in self._parents.items() if not ps)

    def hypernym_closure(self, class_id: str) -> frozenset[str]:
        """The class itself plus all its ancestors, at every level."""
        cached = self._closures.get(class_id)
        if cached is not None:
            return cached
        # Iterative walk: deep chains must not exhaust the call stack.
        closure = {class_id}
        frontier = [class_id]
        while frontier:
            node = frontier.pop()
            for p in self.parents(node):
                if p in closure:
                    continue
                ancestor_closure = self._closures.get(p)
                if ancestor_closure is not None:
                    closure |= ancestor_closure
                else:
                    closure.add(p)
                    frontier.append(p)
        result = frozenset(closure)
        self._closures[class_id] = result
        return result

    def is_ancestor_or_equal(self, a: str, b: str) -> bool:
        """True iff ``a`` is ``b`` itself or a hypernym of ``b``."""
        if a not in self._parents:
            raise TaxonomyError(f"unknown class {a!r}")
        return a in self.hypernym_closure(b)

    def related(self, a: str, b: str) -> bool:
        """True iff the classes are linked by hyperonymy in either direction."""
        return self.is_ancestor_or_equal(a, b) or self.is_ancestor_or_equal(b, a)


class SenseLexicon:
    """Noun lemma -> sense classes, bound to the taxonomy it was validated against."""

    def __init__(self, taxonomy: Taxonomy, senses: dict[str, frozenset[str]]):
        self.taxonomy = taxonomy
        self._senses = senses
        self._class_sets: dict[str, frozenset[str]] = {}
        self._weights: dict[str, dict[str, Fraction]] = {}

    @property
    def nouns(self) -> frozenset[str]:
        return frozenset(self._senses)

    def __contains__(self, noun: str) -> bool:
        return noun in self._senses

    def __len__(self) -> int:
        return len(self._senses)

    def senses(self, noun: str) -> frozenset[str]:
        try:
            return self._senses[noun]
        except KeyError:
            raise TaxonomyError(f"unknown noun {noun!r}") from None

    def classes_of(self, noun: str) -> frozenset[str]:
        """Union of the hypernym closures of all the noun's senses."""
        cached = self._class_sets.get(noun)
        if cached is not None:
            return cached
        closure: set[str] = set()
        for s in self.senses(noun):
            closure |= self.taxonomy.hypernym_closure(s)
        result = frozenset(closure)
        self._class_sets[noun] = result
        return result

    def noun_in_class(self, noun: str, class_id: str) -> bool:
        """True iff some sense of the noun lies at or below ``class_id``."""
        return class_id in self.classes_of(noun)

    def sense_fraction(self, noun: str, class_id: str) -> Fraction:
        """Fraction of the noun's senses whose hypernym closure contains the class."""
        return self.class_weights(noun).get(class_id, Fraction(0))

    def class_weights(self, noun: str) -> dict[str, Fraction]:
        """Map each covering class to #senses-under-it / #senses, memoized."""
        cached = self._weights.get(noun)
        if cached is not None:
            return cached
        sense_set = self.senses(noun)
        k = len(sense_set)
        weights: dict[str, Fraction] = {}
        for s in sense_set:
            for c in self.taxonomy.hypernym_closure(s):
                weights[c] = weights.get(c, Fraction(0)) + Fraction(1, k)
        self._weights[noun] = weights
        return weights


def parse_taxonomy(text: str) -> Taxonomy:
    parents: dict[str, set[str]] = {}
    lines: dict[str, int] = {}
    for lineno, line in _iter_data_lines(text):
        fields = line.split("\t")
        if len(fields) != 2:
            raise TaxonomyError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        class_id = _check_class_id(fields[0], lineno)
        if class_id in parents:
            raise TaxonomyError(
                f"duplicate class {class_id!r} (first seen on line {lines[class_id]})", lineno
            )
        lines[class_id] = lineno
        if fields[1] == "-":
            parent_set: set[str] = set()
        else:
            parent_set = {_check_class_id(p, lineno) for p in fields[1].split(",")}
        parents[class_id] = parent_set
    for child, ps in parents.items():
        for p in ps:
            if p not in parents:
                raise TaxonomyError(f"class {child!r} names unknown parent {p!r}", lines[child])
    return Taxonomy(parents)


def parse_lexicon(text: str, taxonomy: Taxonomy) -> SenseLexicon:
    senses: dict[str, frozenset[str]] = {}
    lines: dict[str, int] = {}
    for lineno, line in _iter_data_lines(text):
        fields = line.split("\t")
        if len(fields) != 2:
            raise TaxonomyError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        noun = fields[0]
        if not noun or any(ch.isspace() for ch in noun):
            raise TaxonomyError(f"bad noun lemma {noun!r}", lineno)
        if noun in senses:
            raise TaxonomyError(
                f"duplicate lexicon entry for {noun!r} (first seen on line {lines[noun]})", lineno
            )
        lines[noun] = lineno
        if not fields[1]:
            raise TaxonomyError(f"empty sense list for noun {noun!r}", lineno)
        sense_set = frozenset(_check_class_id(c, lineno) for c in fields[1].split(","))
        for c in sense_set:
            if c not in taxonomy:
                raise TaxonomyError(f"noun {noun!r} names unknown class {c!r}", lineno)
        senses[noun] = sense_set
    return SenseLexicon(taxonomy, senses)


def load_taxonomy(taxonomy_text: str, lexicon_text: str) -> tuple[Taxonomy, SenseLexicon]:
    """Parse and cross-validate a taxonomy file and its companion lexicon."""
    taxonomy = parse_taxonomy(taxonomy_text)
    lexicon = parse_lexicon(lexicon_text, taxonomy)
    return taxonomy, lexicon


def load_taxonomy_files(taxonomy_path, lexicon_path) -> tuple[Taxonomy, SenseLexicon]:
    with open(taxonomy_path, encoding="utf-8") as f:
        taxonomy_text = f.read()
    with open(lexicon_path, encoding="utf-8") as f:
        lexicon_text = f.read()
    return load_taxonomy(taxonomy_text, lexicon_text)


def check_partial_order(taxonomy: Taxonomy, classes: Iterable[str] | None = None) -> bool:
    """Exhaustively verify reflexivity, antisymmetry and transitivity of
    ``is_ancestor_or_equal`` over the given classes (defaults to all).

    Intended for test fixtures; quadratic-to-cubic in the class count.
    """
    cs = sorted(classes) if classes is not None else sorted(taxonomy.nodes)
    leq = {(a, b): taxonomy.is_ancestor_or_equal(a, b) for a in cs for b in cs}
    for a in cs:
        if not leq[a, a]:
            return False
    for a in cs:
        for b in cs:
            if a != b and leq[a, b] and leq[b, a]:
                return False
            if not leq[a, b]:
                continue
            for c in cs:
                if leq[b, c] and not leq[a, c]:
                    return False
    return True
