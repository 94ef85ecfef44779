from django.template.defaultfilters import register


@register.filter(name="lookup")
def lookup(data, key):
    try:
        return data[key]
    except (KeyError, IndexError, TypeError):
        return ""


@register.filter(name="pad")
def pad(value, width):
    """Right-align in a column of the given width."""
    return str(value).rjust(int(width))


@register.filter(name="format_degree")
def format_degree(degree):
    """``-inf`` for the zero module, ``>=n`` when the window does not determine the degree."""
    if degree is None:
        return "-inf"
    return str(degree)
