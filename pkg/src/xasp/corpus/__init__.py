"""Bundled example programs."""

from __future__ import annotations

from importlib import resources

_SUFFIX = ".lp"
_RULES_MARKER = "% --- rules ---"


def names() -> list[str]:
    return sorted(p.name[:-len(_SUFFIX)] for p in resources.files(__name__).iterdir()
                  if p.name.endswith(_SUFFIX))


def read(name: str) -> str:
    name = name.removesuffix(_SUFFIX)
    if name not in names():
        raise FileNotFoundError(f"no bundled program named {name!r}")
    return resources.files(__name__).joinpath(name + _SUFFIX).read_text(encoding="utf-8")


def describe(name: str) -> str:
    """First comment line of a bundled program."""
    for line in read(name).splitlines():
        if line.startswith("%"):
            return line.lstrip("% ").strip()
    return ""


def anomaly_instance(interactions, attributes) -> str:
    """Anomaly-discovery rules over a caller-supplied pair of graphs.

    ``interactions`` are (student, company) pairs and ``attributes``
    (student, attribute) pairs; node declarations are kept from the bundled file.
    """
    text = read("anomaly_rules.lp")
    head, _, tail = text.partition("% --- graph ---")
    _, _, rules = tail.partition(_RULES_MARKER)
    facts = [f"edge({s}, {c})." for s, c in interactions]
    facts += [f"edge_attrib({s}, {a})." for s, a in attributes]
    return head + "\n".join(facts) + "\n" + rules
