# ABOUTME: Factory pattern for creating verification suite instances by name
# ABOUTME: Manages the suite registry and caches instances between runs

from typing import Dict, List, Type

from app.errors import ConfigError
from app.services.base_check_service import CheckSuite
from app.services.check_suites import SUITES
from logging_config import get_logger

logger = get_logger(__name__)

ALL = "all"


class CheckSuiteFactory:
    """Factory class for creating and managing verification suites."""

    _registry: Dict[str, Type[CheckSuite]] = {suite.name: suite for suite in SUITES}
    # Cache for suite instances to avoid re-initialization
    _suite_cache: Dict[str, CheckSuite] = {}

    @classmethod
    def names(cls) -> List[str]:
        """Registered suite names in registration order."""
        return list(cls._registry)

    @classmethod
    def resolve(cls, requested: List[str]) -> List[str]:
        """Expand `all` and validate names, keeping registration order and dropping duplicates."""
        wanted = set()
        for name in requested:
            if name == ALL:
                wanted.update(cls._registry)
            elif name in cls._registry:
                wanted.add(name)
            else:
                raise ConfigError(f"Unknown suite: {name}", valid=[ALL, *cls.names()])
        return [name for name in cls._registry if name in wanted]

    @classmethod
    def get_suite(cls, name: str) -> CheckSuite:
        """
        Get the suite instance registered under `name`.

        Raises:
            ConfigError: If the name is not registered
        """
        if name in cls._suite_cache:
            return cls._suite_cache[name]
        if name not in cls._registry:
            raise ConfigError(f"Unknown suite: {name}", valid=[ALL, *cls.names()])

        suite = cls._registry[name]()
        cls._suite_cache[name] = suite
        logger.info(f"Created new {name} suite instance")
        return suite

    @classmethod
    def clear_cache(cls):
        """Clear the suite cache. Useful for testing."""
        cls._suite_cache.clear()
        logger.info("Cleared check suite cache")
