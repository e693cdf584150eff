from pathlib import Path

from decouple import Config, RepositoryEmpty, RepositoryEnv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

TRUTHY = ("1", "yes", "true", "on", "y", "t")


def _cast(value, cast):
    if cast is None:
        return value
    if cast is bool:
        return str(value).lower() in TRUTHY
    return cast(value)


# Load configuration with .env file taking precedence over system environment variables
env_file_path = BASE_DIR / ".env"
if env_file_path.exists():

    class EnvFileFirstConfig:
        def __init__(self, env_file_path):
            self.env_repo = RepositoryEnv(str(env_file_path))
            self.sys_repo = Config(RepositoryEmpty())

        def __call__(self, key, default=None, cast=None):
            # First try to get from .env file
            try:
                value = self.env_repo[key]
                if value is not None:
                    return _cast(value, cast)
            except KeyError:
                pass

            # Then fall back to the process environment
            return self.sys_repo(key, default=default, cast=cast or (lambda v: v))

    config = EnvFileFirstConfig(env_file_path)
else:
    # Load only from system environment variables
    config = Config(RepositoryEmpty())

SECRET_KEY = config("SECRET_KEY", default="mlouvain-local-only")

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    "networks",
    "clustering",
    "benchmarks",
    "evaluation",
]

# No persistence layer: graphs come from files and generators
DATABASES = {}

USE_TZ = True

# Solver safety bounds
LOUVAIN_MAX_OUTER_ITERS = config("LOUVAIN_MAX_OUTER_ITERS", default=100, cast=int)
LOUVAIN_MAX_INNER_SWEEPS = config("LOUVAIN_MAX_INNER_SWEEPS", default=1000, cast=int)
LOUVAIN_CHECK_INVARIANTS = config(
    "LOUVAIN_CHECK_INVARIANTS", default=False, cast=bool
)

# Experiment harness
EXPERIMENT_WORKERS = config("EXPERIMENT_WORKERS", default=1, cast=int)
EXPERIMENT_SEED = config("EXPERIMENT_SEED", default=2023, cast=int)
EXPERIMENT_OUTPUT_DIR = Path(
    config("EXPERIMENT_OUTPUT_DIR", default=str(BASE_DIR / "results"))
)
KNN_NEIGHBORS = config("KNN_NEIGHBORS", default=10, cast=int)
GAMMA_GRID = [
    float(value)
    for value in config("GAMMA_GRID", default="0.1,0.3,0.5,0.7,0.9").split(",")
]

LOG_LEVEL = config("LOG_LEVEL", default="INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {process:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose" if DEBUG else "simple",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "networks": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "clustering": {
            "handlers": ["console"],
            "level": "DEBUG" if LOG_LEVEL == "DEBUG" else "WARNING",
            "propagate": False,
        },
        "benchmarks": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "evaluation": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "mlouvain": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
