import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Tool identity (echoed into every output header)
TOOL_NAME = "mbi-lab"
TOOL_VERSION = "0.3.0"

# Physical defaults
DEFAULT_ALPHA = float(os.getenv('MBI_ALPHA', 1.0 / 137.036))

# Output
OUTPUT_DIR = os.getenv('MBI_OUTPUT_DIR', 'results')
CSV_FLOAT_FORMAT = '%.16e'  # 17 significant digits

# Parallel sweeps
PARALLEL_WORKERS = int(os.getenv('MBI_PARALLEL_WORKERS', 4))

# Electrostatic solver
STATIC_TOLERANCE = float(os.getenv('MBI_STATIC_TOLERANCE', 1e-10))
STATIC_MAX_ITERATIONS = int(os.getenv('MBI_STATIC_MAX_ITERATIONS', 60))
STATIC_CORE_CELLS = int(os.getenv('MBI_STATIC_CORE_CELLS', 16))
STATIC_GROWTH = float(os.getenv('MBI_STATIC_GROWTH', 1.15))
STATIC_OUTER_FACTOR = float(os.getenv('MBI_STATIC_OUTER_FACTOR', 50.0))
STATIC_QUADRATURE_LEVEL = 3  # near-charge triangles split into 4**level pieces

# 1D wave evolution
WAVE_CFL = float(os.getenv('MBI_WAVE_CFL', 0.4))
WAVE_CFL_LIMIT = 1.0
WAVE_CELLS = 256
WAVE_LENGTH = 20.0

# Radial Hamilton-Jacobi evolution
HJ_CFL = float(os.getenv('MBI_HJ_CFL', 0.5))
HJ_CFL_LIMIT = 1.0
HJ_CELLS_PER_BETA = 20
HJ_GRADIENT_CAP = 1e8

# Ellipticity certificate
CERTIFICATE_EPSILON = 0.1
CERTIFICATE_SAMPLES = 10000

# Logging Configuration
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVEL = os.getenv('MBI_LOG_LEVEL', 'INFO')
MAX_LOG_SIZE = 5 * 1024 * 1024  # 5 MB
BACKUP_COUNT = 5
