# -*- coding: utf-8 -*-
"""Handlers package."""

from ptree.handlers.encode import encode_command
from ptree.handlers.build import build_command
from ptree.handlers.count import count_command
from ptree.handlers.call import call_command
from ptree.handlers.mine import mine_command

__all__ = [
    'encode_command',
    'build_command',
    'count_command',
    'call_command',
    'mine_command',
]
