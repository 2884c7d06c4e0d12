# empty to mark package
