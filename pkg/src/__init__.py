from src.utils.logging_config import get_logger

logger = get_logger(__name__)
# Cartan workbench - source package
