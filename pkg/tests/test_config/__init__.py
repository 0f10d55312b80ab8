# Config tests
