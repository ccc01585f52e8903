"""Retrieval-augmented generative QA pipeline for event argument extraction."""

from ._rgqa import (
    ArgumentPrediction,
    Demonstration,
    RoleInstance,
    Span,
    allocate_proportional,
    analogy_label,
    build_input,
    build_target,
    cosine_similarity,
    dot_product,
    head_token,
    hellinger_distance,
    joint_representation,
    kmeans,
    locate_span,
    mark_trigger,
    match_em,
    match_hm,
    per_type_distance,
    render_demonstration,
    retrieve_top,
    sample,
    score,
    split_answers,
    type_distribution,
)

__all__ = [
    "ArgumentPrediction",
    "Demonstration",
    "RoleInstance",
    "Span",
    "allocate_proportional",
    "analogy_label",
    "build_input",
    "build_target",
    "cosine_similarity",
    "dot_product",
    "head_token",
    "hellinger_distance",
    "joint_representation",
    "kmeans",
    "locate_span",
    "mark_trigger",
    "match_em",
    "match_hm",
    "per_type_distance",
    "render_demonstration",
    "retrieve_top",
    "sample",
    "score",
    "split_answers",
    "type_distribution",
]
