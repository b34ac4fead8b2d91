# Scenario file processing
