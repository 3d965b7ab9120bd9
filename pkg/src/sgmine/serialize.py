"""JSON interchange for SDFAs and SDAGs, and Graphviz DOT rendering."""

from __future__ import annotations

import json

from .automata import SDFA, termination_probability
from .sdag import INPUT, OUTPUT, SDAG, AnnotatedSDAG, probabilities_from_frequencies


def sdfa_to_dict(sdfa: SDFA) -> dict:
    return {
        "states": list(sdfa.states),
        "initial": sdfa.initial,
        "alphabet": sorted(sdfa.alphabet),
        "transitions": [
            {"from": src, "action": action, "to": dst, "prob": prob}
            for (src, action), (dst, prob) in sorted(sdfa.transitions.items())
        ],
    }


def sdfa_from_dict(data: dict) -> SDFA:
    transitions = {}
    for tr in data["transitions"]:
        key = (tr["from"], tr["action"])
        if key in transitions:
            raise ValueError(f"duplicate transition {key}: not deterministic")
        transitions[key] = (tr["to"], float(tr["prob"]))
    return SDFA(
        tuple(data["states"]),
        data["initial"],
        transitions,
        frozenset(data.get("alphabet", ())),
    )


def sdag_to_dict(graph: SDAG | AnnotatedSDAG) -> dict:
    ann = graph if isinstance(graph, AnnotatedSDAG) else None
    base = ann.base if ann else graph
    nodes = []
    for n in base.nodes:
        entry = {"id": n, "label": base.labels[n]}
        if ann:
            entry["freq"] = ann.node_freq[n]
        nodes.append(entry)
    arcs = []
    for (src, dst), prob in base.arcs.items():
        entry = {"from": src, "to": dst, "prob": prob}
        if ann:
            entry["freq"] = ann.arc_freq[(src, dst)]
        arcs.append(entry)
    out = {"nodes": nodes, "input": base.input, "output": base.output, "arcs": arcs}
    if ann:
        out["cases"] = ann.cases
    return out


def sdag_from_dict(data: dict) -> SDAG:
    """Read an SDAG; arcs may carry ``prob`` or, failing that, ``freq``."""
    labels = {n["id"]: n["label"] for n in data["nodes"]}
    inp = data.get("input", INPUT)
    outp = data.get("output", OUTPUT)
    arcs = data["arcs"]
    if all("prob" in a for a in arcs):
        return SDAG(labels, {(a["from"], a["to"]): float(a["prob"]) for a in arcs}, inp, outp)
    if all("freq" in a for a in arcs):
        freqs = {(a["from"], a["to"]): float(a["freq"]) for a in arcs}
        return probabilities_from_frequencies(labels, freqs, data.get("cases"), inp, outp)
    raise ValueError("every arc needs a 'prob' (or every arc a 'freq')")


def model_kind(data: dict) -> str:
    if "transitions" in data:
        return "sdfa"
    if "arcs" in data:
        return "sdag"
    raise ValueError("cannot tell model kind: expected 'transitions' or 'arcs'")


def model_from_dict(data: dict, kind: str | None = None):
    kind = kind or model_kind(data)
    if kind == "sdfa":
        return sdfa_from_dict(data)
    if kind == "sdag":
        return sdag_from_dict(data)
    raise ValueError(f"unknown model kind {kind!r}")


def model_to_dict(model) -> dict:
    if isinstance(model, SDFA):
        return sdfa_to_dict(model)
    return sdag_to_dict(model)


def load_model(path, kind: str | None = None):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh), kind)


def dump_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


_DOT_ESCAPES = str.maketrans({"\\": "\\\\", '"': '\\"', "\n": "\\n"})


def _q(s) -> str:
    return '"' + str(s).translate(_DOT_ESCAPES) + '"'


def sdfa_to_dot(sdfa: SDFA, name: str = "sdfa") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=TB;", '  __start [shape=point, label=""];']
    for s in sdfa.states:
        term = termination_probability(sdfa, s)
        lines.append(f"  s{s} [shape=circle, label={_q(f'{term:.2f}')}, xlabel={_q(f's{s}')}];")
    lines.append(f"  __start -> s{sdfa.initial};")
    for (src, action), (dst, prob) in sorted(sdfa.transitions.items()):
        lines.append(f"  s{src} -> s{dst} [label={_q(f'{action} ({prob:.2f})')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def sdag_to_dot(graph: SDAG | AnnotatedSDAG, name: str = "sdag") -> str:
    ann = graph if isinstance(graph, AnnotatedSDAG) else None
    base = ann.base if ann else graph

    def node_id(n):
        return _q(f"n_{n}")

    def node_text(n, label):
        return label if ann is None else f"{label}\n{ann.node_freq[n]:.1f}"

    lines = [f"digraph {_q(name)} {{", "  node [shape=box, style=rounded];"]
    lines.append(f"  {node_id(base.input)} [label={_q(node_text(base.input, 'i'))}];")
    for n in base.nodes:
        lines.append(f"  {node_id(n)} [label={_q(node_text(n, base.labels[n]))}];")
    lines.append(f"  {node_id(base.output)} [label={_q(node_text(base.output, 'o'))}];")
    for (src, dst), prob in base.arcs.items():
        text = f"{prob:.2f}" if ann is None else f"{prob:.2f}\n({ann.arc_freq[(src, dst)]:.1f})"
        lines.append(f"  {node_id(src)} -> {node_id(dst)} [label={_q(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(model) -> str:
    if isinstance(model, SDFA):
        return sdfa_to_dot(model)
    return sdag_to_dot(model)
