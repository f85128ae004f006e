int set_label(struct widget *w, const char *input)
{
    char label[32];
    if (input == NULL)
        return -1;
    strcpy(label, input);
    return widget_apply(w, label);
}
