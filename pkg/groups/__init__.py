# Groups module: Bianchi groups, exact ring arithmetic, characters and representations
