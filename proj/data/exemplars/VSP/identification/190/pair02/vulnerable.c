int join(const char *a, unsigned short la, const char *b, unsigned short lb)
{
    unsigned short len = la + lb;
    char *out = malloc(len);
    if (!out)
        return -1;
    memcpy(out, a, la);
    memcpy(out + la, b, lb);
    return emit(out, len);
}
