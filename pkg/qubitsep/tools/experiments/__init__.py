"""The ``experiments`` command: runs estimators and prints JSON reports."""
