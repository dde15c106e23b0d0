"""
File: handlers/__init__.py
Location: tautcheck/handlers/__init__.py
Purpose: Handlers package initialization
"""

from .command_handlers import (
    build_parser,
    cmd_bclass,
    cmd_cache,
    cmd_oracle,
    cmd_verify,
    register_command_handlers,
)

__all__ = [
    'build_parser',
    'register_command_handlers',
    'cmd_bclass',
    'cmd_verify',
    'cmd_cache',
    'cmd_oracle'
]
