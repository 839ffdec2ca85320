import importlib.resources

from index3d.tri import load_gluing_matrix

FIXTURES = ("fig8", "trefoil", "solidtorus", "t2xi", "cPcbbbdei", "m009")


def fixture_text(name):
    ref = importlib.resources.files("index3d") / "data" / name
    return ref.read_text()


def fixture_gluing(name):
    return load_gluing_matrix(fixture_text(name + ".glu"))
