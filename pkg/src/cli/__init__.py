"""
mtm-bench command line interface
"""
