"""Plotting for hyperchemo outputs; reads snapshot CSVs and study tables only."""

from .figures import plot_convergence, plot_density_1d, plot_density_2d
from .tables import SchemaError, read_snapshot, read_study

__all__ = ["plot_convergence", "plot_density_1d", "plot_density_2d",
           "SchemaError", "read_snapshot", "read_study"]
