"""Tests for observability and monitoring functionality."""
