from __future__ import annotations

from minors_core.laws import (
    gap_law_constants,
    h_wigner,
    h_wishart_bulk,
    mp_edges,
    soft_edge_constant,
    wishart_gap_scale,
)
from minors_pydantic import Side


def constants_table(
    energy: float | None = None, q: float | None = None, mp_energy: float | None = None
) -> dict[str, float | None]:
    """Deterministic constants for the given energies and aspect ratio.

    Left-edge entries are ``None`` at q = 1, where the left edge is hard.
    """
    table: dict[str, float | None] = {
        "C_beta_1": gap_law_constants(1).normalization,
        "C_beta_2": gap_law_constants(2).normalization,
    }
    if energy is not None:
        table["h_wigner"] = h_wigner(energy)
    if q is None:
        return table
    table["lambda_minus"], table["lambda_plus"] = mp_edges(q)
    table["c_q_right"] = soft_edge_constant(q, Side.right)
    table["gap_scale_right"] = wishart_gap_scale(q, Side.right)
    soft_left = q < 1.0
    table["c_q_left"] = soft_edge_constant(q, Side.left) if soft_left else None
    table["gap_scale_left"] = wishart_gap_scale(q, Side.left) if soft_left else None
    if mp_energy is not None:
        table["h_wishart_bulk"] = h_wishart_bulk(mp_energy, q)
    return table
