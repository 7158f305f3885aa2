"""glyphforge: recognition toolkit for small handwritten-glyph datasets.

Subpackages:

- ``dataset``    manifests, annotation indices, augmentation, synthesis
- ``features``   LBP / Gabor / LGBP descriptors
- ``svm``        linear one-vs-rest classifier for descriptor features
- ``nn``         from-scratch tensor stack, CNN catalog, Adam training
- ``fusion``     decision-level combination of classifier outputs
- ``evaluation`` metrics, experiment runner, report rendering
- ``service``    HTTP annotation/prediction API
"""

__version__ = "0.1.0"
