#!/usr/bin/env python3
"""
Scheme Registry - Name-based registration and construction of time steppers
"""

import logging
from typing import Dict, List, Optional, Type

from .base import TimeStepper

logger = logging.getLogger(__name__)


class SchemeRegistry:
    """Central registry for all available schemes"""

    _instance = None
    _schemes: Dict[str, Type[TimeStepper]] = {}

    def __new__(cls):
        """Singleton so every import sees one registry"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @classmethod
    def register(cls, name: str = None):
        """
        Decorator to register a stepper class

        Usage:
            @SchemeRegistry.register("my_scheme")
            class MyScheme(TimeStepper):
                pass

        Without a name the lowercased class name minus 'scheme' is used.
        """
        def decorator(scheme_class: Type[TimeStepper]):
            scheme_name = name or scheme_class.__name__.lower().replace('scheme', '')

            if not issubclass(scheme_class, TimeStepper):
                raise TypeError(f"{scheme_class.__name__} must inherit from TimeStepper base class")

            cls._schemes[scheme_name] = scheme_class
            logger.debug(f"Registered scheme: {scheme_name} ({scheme_class.__name__})")

            return scheme_class

        return decorator

    @classmethod
    def get_scheme(cls, name: str) -> Optional[Type[TimeStepper]]:
        """Get a scheme class by name"""
        return cls._schemes.get(name)

    @classmethod
    def create_stepper(cls, name: str, config, **kwargs) -> Optional[TimeStepper]:
        """Create a stepper instance by name"""
        scheme_class = cls.get_scheme(name)
        if scheme_class:
            return scheme_class(config, **kwargs)
        logger.error(f"Scheme '{name}' not found in registry")
        return None

    @classmethod
    def list_schemes(cls) -> List[str]:
        """Get list of all registered scheme names"""
        return list(cls._schemes.keys())
