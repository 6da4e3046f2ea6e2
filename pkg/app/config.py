import logging
import os

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("SHADOWSIM_LOG_LEVEL", "INFO")
THREADS = int(os.getenv("SHADOWSIM_THREADS", "1"))
OUTPUT_DIR = os.getenv("SHADOWSIM_OUTPUT_DIR", "results")
CONFIG_DIR = os.getenv(
    "SHADOWSIM_CONFIG_DIR",
    os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs"),
)
DEFAULT_SEED = int(os.getenv("SHADOWSIM_SEED", "20160601"))

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Единая настройка логирования для CLI и HTTP-приложения."""
    logging.basicConfig(level=(level or LOG_LEVEL).upper(), format=LOG_FORMAT)
