"""Persistence landscapes of two-parameter Rips-codensity filtrations,
bootstrap confidence bands for their means, and band-depth shape
classification.

The pipeline: sample a shape (`pointcloud`), grade its Rips complex by scale
and codensity (`bifiltration`), evaluate the landscape on a grid via
diagonal-slice persistence (`persistence`, `landscape`), summarize samples
with bootstrap bands (`bands`), and classify by maximum band depth
(`classify`).  The `landbands` console script wires these end to end.
"""

from .kernels import BACKEND
from .pointcloud import (PointCloud, DensityEstimate, sample_sphere,
                         sample_torus, sample_klein_bottle, add_gaussian_noise,
                         add_salt_pepper_noise, gaussian_kde, scott_bandwidth,
                         write_pointcloud_csv, read_pointcloud_csv)
from .bifiltration import (Bigrade, Bifiltration, build_rips_codensity,
                           normalize, validate, save_bifiltration,
                           load_bifiltration)
from .persistence import (FilteredComplex, Barcode, DiagonalLine, SegmentLine,
                          slice_bifiltration, reduce, landscape_1d,
                          save_barcode_csv, load_barcode_csv)
from .landscape import (Grid, LandscapeGrid, compute_landscape,
                        compute_landscape_1p, rank_invariant, mean_landscape,
                        sup_abs_diff, save_landscape_grid, load_landscape_grid,
                        export_landscape_csv)
from .bands import (ConfidenceBand, bootstrap_band, bootstrap_thetas,
                    empirical_quantile, empirical_process, empirical_covariance,
                    save_band, load_band, export_band_csv)
from .classify import (BandModel, Prediction, CVReport, band_depth, train,
                       predict, cross_validate, cross_validate_report,
                       save_results, save_confusion_csv)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "PointCloud", "DensityEstimate", "sample_sphere", "sample_torus",
    "sample_klein_bottle", "add_gaussian_noise", "add_salt_pepper_noise",
    "gaussian_kde", "scott_bandwidth", "write_pointcloud_csv",
    "read_pointcloud_csv",
    "Bigrade", "Bifiltration", "build_rips_codensity", "normalize", "validate",
    "save_bifiltration", "load_bifiltration",
    "FilteredComplex", "Barcode", "DiagonalLine", "SegmentLine",
    "slice_bifiltration", "reduce", "landscape_1d", "save_barcode_csv",
    "load_barcode_csv",
    "Grid", "LandscapeGrid", "compute_landscape", "compute_landscape_1p",
    "rank_invariant", "mean_landscape", "sup_abs_diff", "save_landscape_grid",
    "load_landscape_grid", "export_landscape_csv",
    "ConfidenceBand", "bootstrap_band", "bootstrap_thetas",
    "empirical_quantile", "empirical_process", "empirical_covariance",
    "save_band", "load_band", "export_band_csv",
    "BandModel", "Prediction", "CVReport", "band_depth", "train", "predict",
    "cross_validate", "cross_validate_report", "save_results",
    "save_confusion_csv",
]
