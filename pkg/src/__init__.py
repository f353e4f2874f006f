"""
RecTune - Automated Recommender Selection
Pick the best rating predictor and its hyperparameters under a budget.
"""

__version__ = "1.0.0"
__author__ = "RecTune Team"
