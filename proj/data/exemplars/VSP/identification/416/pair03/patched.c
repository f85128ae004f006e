int grow(char *buf, size_t size)
{
    char *n = realloc(buf, size);
    if (n == NULL)
        return -1;
    n[0] = 'x';
    return consume(n);
}
