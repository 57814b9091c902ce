# config.py
# Default parameters for every stage of the stochastic-texture pipeline.
# Values here are plain module constants; run_config.py turns them into
# validated parameter objects and lets a key=value file override them.

import os

from dotenv import load_dotenv

load_dotenv()

# --- System Logger Configuration ---
# The log file is opened lazily on first write; NST_LOG_FILE overrides it.
LOG_FILE_PATH = os.getenv("NST_LOG_FILE", "nst_log.txt")
# Entries below this level are dropped (DEBUG, INFO, WARN, ERROR).
LOG_LEVEL = os.getenv("NST_LOG_LEVEL", "DEBUG").upper()

# --- Image I/O ---
PIXEL_MAXVAL = 255
SUPPORTED_IMAGE_MODES = ("L", "RGB")
RAW_HEADER_DTYPE = "<u8"
RAW_DATA_DTYPE = "<f8"

# --- fBm Synthesis and Hurst Estimation ---
# Exact synthesis factors an (n*n - 1)^2 covariance matrix, hence the bound.
EXACT_SYNTH_MAX_SIDE = 96
EXACT_SYNTH_JITTER = 1e-10
SPECTRAL_SUPPORT_RADIUS = 2.0
SPECTRAL_NEGATIVE_EIGEN_TOLERANCE = 1e-8
HURST_MAX_LAG = 8
HURST_MIN_FIELD_SIDE = 8
HURST_MIN_LAGS = 3
HURST_CLAMP = (0.01, 0.99)
# Within this distance of H = 0.5 the sigma_w relation uses its analytic limit.
HURST_HALF_LIMIT_WINDOW = 1e-7

# --- Wavelet Self-Similarity ---
SELFSIM_LEVELS = 3
SELFSIM_KL_BOUND = 0.05
PDF_GRID_POINTS = 2**16 + 1
PDF_GRID_HALF_WIDTH = 8.0
RATIO_CHECK_LEVELS = 6
RATIO_CHECK_FIRST_LEVEL = 3
RATIO_CHECK_MIN_LENGTH = 2**10

# --- RTV Decomposition ---
RTV_LAMBDA = 0.05
RTV_SIGMA_S = 3.0
RTV_EPS = 1e-3
RTV_SHARPNESS = 0.02
RTV_ITERATIONS = 4
RTV_CG_TOL = 1e-6
RTV_MIN_SIDE = 8
RTV_MAX_STEP_HALVINGS = 30

# --- Phase Congruency ---
# Log-Gabor bank; the noise threshold is estimated from the finest scale
# unless PC_GAMMA is set.
PC_SCALES = 4
PC_ORIENTATIONS = 6
PC_MIN_WAVELENGTH = 3.0
PC_MULT = 2.1
PC_SIGMA_ON_F = 0.55
PC_NOISE_K = 2.0
PC_CUT_OFF = 0.5
PC_G = 10.0
PC_EPS = 1e-4
PC_GAMMA = None
PC_MIN_SIDE = 16

# --- Structure Thresholding ---
STH_QUANT_LEVELS = 5
STH_DARK_THRESHOLD = 3
STH_CONNECTIVITY = 4
STH_EQUALIZE_BINS = 256
STH_MIN_SIDE = 16

# --- Feature Extraction ---
PATCH_SIZE = 32
STRUCTURAL_MODES = ("pc", "sth")
FEATURE_VIEWS = ("texture", "structure", "both")

# --- SVM ---
SVM_C = 10.0
SVM_TOL = 1e-3
SVM_KERNELS = ("rbf", "linear")
SVM_MAX_PASSES = 100_000
SVM_TAU = 1e-12

# --- Fusion Network ---
FUSION_HIDDEN = (8, 4)
FUSION_EPOCHS = 1000
FUSION_LR = 0.05
FUSION_BIAS_INIT = 0.01
# Independent initializations per model; the lowest final training loss wins.
FUSION_RESTARTS = 8

# --- Evaluation Protocol ---
# Kylberg-sized sets keep 40 test examples; other sizes keep the same share.
PROTOCOL_REFERENCE_SIZE = 240
PROTOCOL_REFERENCE_TEST = 40
PROTOCOL_REPETITIONS = 10
SPLIT_MAX_RESAMPLES = 100

# --- Seeding ---
# Stage indices mixed into the run seed; order is part of the output contract.
SEED_STAGES = {
    "split": 0,
    "fusion_init": 1,
    "synth": 2,
    "synthetic_dataset": 3,
}
