"""
Graphviz DOT rendering of trees.
"""
from typing import Union

from src.tree.models import LeafNode, SplitNode, Tree


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(*lines: str) -> str:
    # DOT line breaks are the two characters backslash-n
    return '"' + "\\n".join(line.replace("\\", "\\\\").replace('"', '\\"') for line in lines) + '"'


def to_dot(tree: Tree, name: str = "tree") -> str:
    """
    Render a tree as Graphviz DOT.

    Inner nodes show the variable and adjusted p-value, edges the branch
    rule, leaves the node size and both class frequencies. Node ids follow
    preorder starting at 1. Output is byte-deterministic.
    """
    small, large = tree.labels
    lines = [f"digraph {_quote(name)} {{", '  node [fontname="Helvetica"];']
    counter = 0

    def visit(node: Union[SplitNode, LeafNode]) -> int:
        nonlocal counter
        counter += 1
        node_id = counter
        if isinstance(node, LeafNode):
            label = _label(
                f"n={node.n}",
                f"{small}: {node.freqs[0]:.3f}",
                f"{large}: {node.freqs[1]:.3f}",
            )
            lines.append(f"  {node_id} [shape=box, label={label}];")
            return node_id
        lines.append(f"  {node_id} [shape=ellipse, label={_label(node.variable, f'p={node.p_adjusted:.3g}')}];")
        left_id = visit(node.left)
        lines.append(f"  {node_id} -> {left_id} [label={_label(node.rule.describe(left=True))}];")
        right_id = visit(node.right)
        lines.append(f"  {node_id} -> {right_id} [label={_label(node.rule.describe(left=False))}];")
        return node_id

    visit(tree.root)
    lines.append("}")
    return "\n".join(lines) + "\n"
