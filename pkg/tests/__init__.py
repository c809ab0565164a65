# bicrates test package
