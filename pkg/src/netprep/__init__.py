"""Intrusion-detection dataset preprocessing and feature selection.

Modules: :mod:`~netprep.dataset` and :mod:`~netprep.io` (data model, ARFF/CSV),
:mod:`~netprep.discretize`, :mod:`~netprep.info_gain`, :mod:`~netprep.pmf`,
:mod:`~netprep.normalize`, :mod:`~netprep.classifiers`, :mod:`~netprep.sbs`,
:mod:`~netprep.variants` and :mod:`~netprep.cli`.
"""

__version__ = "0.1.0"
