"""Simulated three-fold measurements and their inversion back to the interaction symbol."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fieldtheory.model import GaugeModel
from ..mathkit.poly import SpacetimePoly
from ..microlocal.geometry import InteractionGeometry, build_geometry, jet_geometry
from ..microlocal.symbols import IModel, three_fold_symbol
from ..microlocal.transport import (Connection, SymbolTriple, central_matrix, parallel_transport,
                                    ray_transform)


class SingularTransportError(np.linalg.LinAlgError):
    """The transport along the outgoing ray could not be inverted."""


def ray_transforms(model: GaugeModel, psi, A: Connection, geo: InteractionGeometry, nodes: int = 32,
                   steps: int = 400) -> dict:
    """I_(j) = I_gamma_(j)(l) along the three incoming rays of a geometry."""
    return {j: ray_transform(model, psi, A, geo.incoming_ray(j), None, nodes, steps) for j in (1, 2, 3)}


@dataclass
class MeasurementOracle:
    """Forward model for the Dirac channel of three-fold measurements.

    The hidden data are the spinor ``psi`` and the connection ``A``; ``source``
    is the central algebra element carried by the three sources.  Outputs are
    c P_gamma4(l) N with c = ``normalization``.
    """

    model: GaugeModel
    psi: SpacetimePoly
    A: Connection = None
    source: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    nodes: int = 32
    steps: int = 400
    normalization: complex = 1.0

    @property
    def b(self) -> np.ndarray:
        return central_matrix(self.model, self.source)

    def transforms(self, geo: InteractionGeometry) -> dict:
        return ray_transforms(self.model, self.psi, self.A, geo, self.nodes, self.steps)

    def interaction(self, geo: InteractionGeometry) -> np.ndarray:
        I = self.transforms(geo)
        return three_fold_symbol(geo, self.b, IModel.explicit(I[1], I[2], I[3])).total

    def interaction_jet(self, y, ell: float, s: float, frame=None, r_order: int = 2):
        """N as a Taylor jet in r (float coefficients) at fixed s: the in-process shortcut."""
        from ..mathkit.jets import JetWindow
        geo = build_geometry(y, ell, 0.0, s, frame=frame, check=False)
        I = self.transforms(geo)
        jg = jet_geometry(s=float(s), exact=False, frame=frame, window=JetWindow(0, 0, max(r_order, 1)))
        return three_fold_symbol(jg, self.b, IModel.explicit(I[1], I[2], I[3])).total

    def query(self, geo: InteractionGeometry) -> SymbolTriple:
        """Symbol of the three-fold wave at (z, eta); w and upsilon vanish for central sources."""
        N = self.interaction(geo)
        P = parallel_transport(self.model, self.A, geo.outgoing_ray(), float(geo.ell), steps=self.steps)
        phi = self.normalization * (N @ P.T)
        m = self.model
        return SymbolTriple(phi, np.zeros((4, m.n), complex), np.zeros(m.dw, complex),
                            np.asarray(geo.z, float), np.asarray(geo.eta, float))


def oracle_query(oracle: MeasurementOracle, geo: InteractionGeometry) -> np.ndarray:
    """The measured Dirac-channel symbol at (z, eta)."""
    return oracle.query(geo).varsigma


def extract_interaction(measured, geo: InteractionGeometry, model: GaugeModel, A: Connection,
                        normalization: complex = 1.0, steps: int = 400) -> np.ndarray:
    """N = c^-1 P_gamma4(l)^-1 phi with the known connection."""
    P = parallel_transport(model, A, geo.outgoing_ray(), float(geo.ell), steps=steps)
    cond = np.linalg.cond(P)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularTransportError(f"outgoing transport is numerically singular (cond {cond:.2e})")
    return np.asarray(measured) @ np.linalg.inv(P).T / normalization


__all__ = ["MeasurementOracle", "oracle_query", "extract_interaction", "ray_transforms", "SingularTransportError"]
