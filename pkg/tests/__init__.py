"""
Test suite for the Enterprise Data Quality & Compliance Platform.
"""
