"""Statement model, graph, NDJSON store, Turtle ingestion and sort-triple emission."""

from qualifier_reasoner.knowledge.graph import KnowledgeGraph
from qualifier_reasoner.knowledge.models import (
    Binding,
    Statement,
    StatementKind,
    StatementPattern,
    Variable,
    statement_equal,
)
from qualifier_reasoner.knowledge.store import load_graph, save_graph, statement_key

__all__ = [
    "Binding",
    "KnowledgeGraph",
    "Statement",
    "StatementKind",
    "StatementPattern",
    "Variable",
    "load_graph",
    "save_graph",
    "statement_equal",
    "statement_key",
]
