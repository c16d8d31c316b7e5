import logging
import os
from dataclasses import dataclass
from datetime import datetime
from functools import wraps

from dotenv import load_dotenv


# Retry decorator for randomized steps that may draw an unusable outcome
def retry(max_retries=10, exceptions=(Exception,), give_up=RuntimeError):
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            last = None
            for attempt in range(max_retries):
                try:
                    return func(*args, **kwargs)
                except exceptions as e:
                    last = e
                    logging.debug(f"Error in {func.__name__}: {e}, retrying {attempt + 1}/{max_retries}...")
            raise give_up(f"Failed to complete {func.__name__} after {max_retries} retries: {last}")
        return wrapper
    return decorator


# General logging setup: stderr plus a timestamped file under log_dir
def setup_logging(log_level=logging.INFO, log_dir="logs"):
    logging.basicConfig(level=log_level, format='%(asctime)s - %(levelname)s - %(message)s', force=True)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime('%Y-%m-%d-%H-%M-%S')
        file_handler = logging.FileHandler(os.path.join(log_dir, f'{timestamp}.log'))
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        logging.getLogger().addHandler(file_handler)
    logging.info("Logging is set up with level: %s", log_level)


@dataclass(frozen=True)
class Settings:
    max_states: int = 10_000_000
    max_vertices: int = 64
    max_edges: int = 64
    oracle_max: int = 12
    charac_max_edges: int = 8
    charac_max_vertices: int = 10
    charac_samples: int = 1000
    default_weights: str = "V"
    log_level: str = "INFO"
    log_dir: str = "logs"
    report_db: str | None = None
    dry_run: bool = False

    def limits(self) -> dict:
        return {
            "max_states": self.max_states,
            "max_vertices": self.max_vertices,
            "max_edges": self.max_edges,
            "oracle_max": self.oracle_max,
            "charac_max_edges": self.charac_max_edges,
            "charac_max_vertices": self.charac_max_vertices,
            "charac_samples": self.charac_samples,
        }


# Load settings from the environment (and .env, if present)
def load_settings():
    load_dotenv()
    return Settings(
        max_states=int(os.getenv("MAX_STATES", "10000000")),
        max_vertices=int(os.getenv("MAX_VERTICES", "64")),
        max_edges=int(os.getenv("MAX_EDGES", "64")),
        oracle_max=int(os.getenv("ORACLE_MAX", "12")),
        charac_max_edges=int(os.getenv("CHARAC_MAX_EDGES", "8")),
        charac_max_vertices=int(os.getenv("CHARAC_MAX_VERTICES", "10")),
        charac_samples=int(os.getenv("CHARAC_SAMPLES", "1000")),
        default_weights=os.getenv("DEFAULT_WEIGHTS", "V"),
        log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
        log_dir=os.getenv("LOG_DIR", "logs"),
        report_db=os.getenv("REPORT_DB") or None,
        dry_run=os.getenv("DRY_RUN", "false").lower() == "true",
    )
