"""Test suite for spinorgp."""
