"""Detect CNN-generated images from checkerboard traces in their enhanced spectrum."""

from .classifier import (ClassifierModel, FeatureVector, TrainConfig, flatten_spectrum,
                         fit_standardizer, load_model, pixel_features, save_model, score, train,
                         train_with_history)
from .enhance import (CropSet, EnhancedSpectrum, accumulate_spectrum, dft2d, enhance_image,
                      median_filter_5x5, residual, sample_crops)
from .ensemble import ScorePair, combine
from .metrics import EvalReport, average_precision, confusion_at, evaluate, f_score
from .pnm import GrayImage, Image, decode_pnm, encode_pgm, encode_pnm, to_gray
from .synthgen import SynthConfig, build_dataset, gen_fake, gen_real

__version__ = "0.1.0"
