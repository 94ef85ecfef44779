from django import forms
from django.conf import settings
from django.utils.translation import gettext_lazy as _

from .exactla import Field
from .exceptions import InputError
from .fihom import CoverStrategy
from .koszul import SignConvention


class WindowForm(forms.Form):
    form_name = _("Computation window")

    N = forms.IntegerField(label=_("Truncation bound N"), required=False, min_value=0)
    amax = forms.IntegerField(label=_("Largest homological degree"), required=False, min_value=0)
    nmax = forms.IntegerField(label=_("Largest evaluation degree"), required=False, min_value=0)
    field = forms.CharField(label=_("Field (Q or Fp:<p>)"), required=False)
    ceiling = forms.IntegerField(label=_("Dimension ceiling"), required=False, min_value=1)
    workers = forms.IntegerField(label=_("Worker threads"), required=False, min_value=1)
    cover = forms.ChoiceField(
        label=_("Free cover strategy"), required=False, choices=[(s.value, s.value) for s in CoverStrategy]
    )
    sign_convention = forms.ChoiceField(
        label=_("Sign convention"), required=False, choices=[(s.value, s.value) for s in SignConvention]
    )

    def clean_field(self):
        value = self.cleaned_data["field"]
        if not value:
            return None
        try:
            return Field.parse(value)
        except InputError as e:
            raise forms.ValidationError(str(e))

    def clean(self):
        retval = super().clean()
        if retval.get("N") is None:
            retval["N"] = settings.FI_KOSZUL_WINDOW
        if retval.get("amax") is None:
            retval["amax"] = settings.FI_KOSZUL_AMAX
        if retval.get("ceiling") is None:
            retval["ceiling"] = settings.FI_KOSZUL_DIMENSION_CEILING
        if retval.get("workers") is None:
            retval["workers"] = settings.FI_KOSZUL_WORKERS
        retval["cover"] = CoverStrategy(retval.get("cover") or settings.FI_KOSZUL_COVER_STRATEGY)
        retval["sign_convention"] = SignConvention(retval.get("sign_convention") or SignConvention.PAPER.value)
        if "N" in self.data and retval.get("nmax") is not None and retval["nmax"] > retval["N"]:
            self.add_error("nmax", _("nmax must not exceed the window N."))
        return retval

    def error_text(self) -> str:
        return "; ".join(
            "{}: {}".format(name, " ".join(str(m) for m in messages)) for name, messages in self.errors.items()
        )
