# -*- coding: utf-8 -*-
"""
Convenience entry point.

This file lets users run `python ptree.py <subcommand> ...` from a checkout.
The command-line logic lives in ptree/main.py.
"""

if __name__ == '__main__':
    import sys

    from ptree.main import main
    sys.exit(main())
