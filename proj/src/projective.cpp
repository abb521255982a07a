namespace geodeq {}
