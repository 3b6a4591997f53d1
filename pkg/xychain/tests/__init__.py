"""test modules for xychain"""
